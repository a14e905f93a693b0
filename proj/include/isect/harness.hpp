/*
 * Copyright (C) 2026 The isect Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef ISECT__HARNESS_HPP
#define ISECT__HARNESS_HPP

#include "sim.hpp"

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace isect {

//==============================================================================
/// One of the eight benchmark cases. Primed cases start with random speeds.
struct CaseId
{
  int number = 1;
  bool primed = false;

  std::string str() const
  {
    return std::to_string(number) + (primed ? "'" : "");
  }

  friend bool operator==(const CaseId&, const CaseId&) = default;
  friend auto operator<=>(const CaseId&, const CaseId&) = default;
};

/// Accepts "1".."4", optionally followed by a prime ("'") or "p".
inline CaseId parse_case(std::string_view s)
{
  CaseId c;
  if (s.size() == 2 && (s[1] == '\'' || s[1] == 'p'))
  {
    c.primed = true;
    s.remove_suffix(1);
  }
  if (s.size() != 1 || s[0] < '1' || s[0] > '4')
    throw std::invalid_argument("unknown case '" + std::string(s) + "'");
  c.number = s[0] - '0';
  return c;
}

inline const std::array<CaseId, 8>& all_cases()
{
  static const std::array<CaseId, 8> cases{{
    {1, false}, {2, false}, {3, false}, {4, false},
    {1, true}, {2, true}, {3, true}, {4, true}}};
  return cases;
}

/// Driver kinds of a case, before assignment to arms.
inline std::array<DriverKind, 4> case_kinds(CaseId c)
{
  using K = DriverKind;
  switch (c.number)
  {
    case 1: return {K::Angelic, K::Angelic, K::Angelic, K::Angelic};
    case 2: return {K::Angelic, K::Angelic, K::Angelic, K::Demonic};
    case 3: return {K::Intermediate, K::Intermediate, K::Intermediate,
      K::Intermediate};
    case 4: return {K::Intermediate, K::Intermediate, K::Intermediate,
      K::Irrational};
  }
  throw std::invalid_argument("unknown case '" + c.str() + "'");
}

/// Purposes of keyed random streams. Agents use purpose 2 (see World).
enum class StreamPurpose : std::uint64_t { Placement = 0, Vehicle = 1 };

/// Concrete setup of one run. Vehicle ids 1..4 enter from S, E, N, W; the
/// kinds are shuffled over the arms.
inline Scenario generate_scenario(
  CaseId c, std::uint64_t run_index, std::uint64_t seed)
{
  auto kinds = case_kinds(c);
  Rng placement = Rng::keyed({seed, run_index, 0,
    static_cast<std::uint64_t>(StreamPurpose::Placement)});
  placement.shuffle(kinds.begin(), kinds.end());

  Scenario sc;
  sc.label = c.str();
  sc.seed = seed;
  sc.run_index = run_index;
  for (std::size_t i = 0; i < all_arms.size(); ++i)
  {
    VehicleSetup v;
    v.id = static_cast<VehicleId>(i + 1);
    v.arm = all_arms[i];
    v.kind = kinds[i];
    Rng rng = Rng::keyed({seed, run_index, static_cast<std::uint64_t>(v.id),
      static_cast<std::uint64_t>(StreamPurpose::Vehicle)});
    v.maneuver = all_maneuvers[rng.below(all_maneuvers.size())];
    v.dims.length = rng.uniform_open(3.5, 5.5);
    v.dims.width = rng.uniform_open(1.5, 2.1);
    if (c.primed)
    {
      const bool malicious =
        v.kind == DriverKind::Demonic || v.kind == DriverKind::Irrational;
      v.initial_speed = rng.uniform(0.0, malicious ? 16.7 : 6.0);
    }
    sc.vehicles.push_back(v);
  }
  return sc;
}

//==============================================================================
/// Outcome of one run without its trace.
struct RunSummary
{
  std::uint64_t run_index = 0;
  bool collided = false;
  bool congested = false;
  bool timed_out = false;
  std::size_t total_steps = 0;
  double mean_vehicle_steps = 0.0;
  std::size_t steps_run = 0;
  std::vector<VehiclePair> collisions;

  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

inline RunSummary summarize(std::uint64_t run_index, const SimResult& r)
{
  return {run_index, r.collided, r.congested, r.timed_out, r.total_steps,
    r.mean_vehicle_steps, r.steps_run, r.collisions};
}

/// Table-style counters of a batch. Merging is exact and commutative, so
/// the result does not depend on execution order.
struct AggregateStats
{
  std::size_t runs = 0;
  std::size_t collisions = 0;
  std::size_t congestions = 0;
  std::size_t timeouts = 0;
  /// Runs that ended normally; they alone enter the step average.
  std::size_t completed = 0;
  std::uint64_t total_steps_sum = 0;

  void add(const RunSummary& r)
  {
    ++runs;
    collisions += r.collided;
    congestions += r.congested;
    timeouts += r.timed_out;
    if (!r.collided && !r.timed_out)
    {
      ++completed;
      total_steps_sum += r.total_steps;
    }
  }

  AggregateStats& operator+=(const AggregateStats& o)
  {
    runs += o.runs;
    collisions += o.collisions;
    congestions += o.congestions;
    timeouts += o.timeouts;
    completed += o.completed;
    total_steps_sum += o.total_steps_sum;
    return *this;
  }

  friend AggregateStats operator+(AggregateStats a, const AggregateStats& b)
  {
    return a += b;
  }

  double collision_rate() const { return percent(collisions); }
  double congestion_rate() const { return percent(congestions); }

  /// Mean total steps over normally ended runs; 0 if there are none.
  double avg_total_steps() const
  {
    return completed == 0 ? 0.0
      : static_cast<double>(total_steps_sum) / static_cast<double>(completed);
  }

  friend bool operator==(const AggregateStats&, const AggregateStats&) = default;

private:
  double percent(std::size_t count) const
  {
    return runs == 0 ? 0.0
      : 100.0 * static_cast<double>(count) / static_cast<double>(runs);
  }
};

//==============================================================================
struct BatchSpec
{
  CaseId case_id;
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  /// Index of the first run; batches over disjoint ranges merge exactly.
  std::uint64_t first_run = 0;
  SimConfig config;
};

struct BatchResult
{
  AggregateStats stats;
  /// Indexed by run, independent of scheduling.
  std::vector<RunSummary> runs;
};

struct BatchOptions
{
  /// Worker threads; 0 or 1 runs everything on the calling thread.
  unsigned jobs = 1;
  /// Record full traces and hand every finished run to `on_run`.
  bool record_traces = false;
  /// Called once per run, serialized by the harness.
  std::function<void(const Scenario&, const SimResult&)> on_run;
  /// Called with every solved game; must be thread-safe when jobs > 1.
  GameObserver observer;
};

inline BatchResult run_batch(const BatchSpec& spec, const BatchOptions& options = {})
{
  spec.config.validate();
  case_kinds(spec.case_id);

  BatchResult out;
  out.runs.resize(spec.runs);
  std::mutex sink;

  const auto work = [&](std::size_t i)
  {
    const std::uint64_t index = spec.first_run + i;
    const Scenario sc = generate_scenario(spec.case_id, index, spec.seed);
    SimOptions sim;
    sim.record_trace = options.record_traces;
    sim.observer = options.observer;
    const SimResult r = run(sc, spec.config, sim);
    out.runs[i] = summarize(index, r);
    if (options.on_run)
    {
      std::lock_guard lock(sink);
      options.on_run(sc, r);
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || spec.runs < 2)
  {
    for (std::size_t i = 0; i < spec.runs; ++i)
      work(i);
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
    {
      pool.emplace_back([&]
      {
        for (std::size_t i = next++; i < spec.runs; i = next++)
        {
          try
          {
            work(i);
          }
          catch (...)
          {
            std::lock_guard lock(sink);
            if (!failure)
              failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool)
      t.join();
    if (failure)
      std::rethrow_exception(failure);
  }

  for (const auto& r : out.runs)
    out.stats.add(r);
  return out;
}

} // namespace isect

#endif // ISECT__HARNESS_HPP
