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

#ifndef ISECT__SIM_HPP
#define ISECT__SIM_HPP

#include "agent.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <utility>

namespace isect {

//==============================================================================
/// Every tunable constant of a simulation.
struct SimConfig
{
  IntersectionLayout layout;
  CostParams cost;
  PatternSet patterns;
  BehaviorParams behavior;
  /// Runs still unresolved after this many steps are reported as timeouts.
  std::size_t step_cap = 600;

  void validate() const
  {
    layout.validate();
    cost.validate();
    behavior.validate();
    if (cost.h != patterns.horizon())
      throw std::invalid_argument(
        "SimConfig: pattern length must equal the horizon h");
    if (step_cap < 1)
      throw std::invalid_argument("SimConfig: step_cap must be >= 1");
  }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct VehicleSetup
{
  VehicleId id = 0;
  Arm arm = Arm::South;
  Maneuver maneuver = Maneuver::Straight;
  VehicleDims dims;
  DriverKind kind = DriverKind::Angelic;
  double initial_speed = 0.0;
};

/// Concrete, fully determined run.
struct Scenario
{
  std::string label;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  std::vector<VehicleSetup> vehicles;

  void validate() const
  {
    if (vehicles.empty() || vehicles.size() > 4)
      throw std::invalid_argument("Scenario: between one and four vehicles");
    std::set<Arm> arms;
    std::set<VehicleId> ids;
    for (const auto& v : vehicles)
    {
      if (!arms.insert(v.arm).second)
        throw std::invalid_argument("Scenario: two vehicles share an arm");
      if (!ids.insert(v.id).second)
        throw std::invalid_argument("Scenario: duplicate vehicle id");
      if (!(v.dims.length > 0.0 && v.dims.width > 0.0))
        throw std::invalid_argument("Scenario: vehicle dimensions must be > 0");
      if (!(v.initial_speed >= 0.0))
        throw std::invalid_argument("Scenario: negative initial speed");
    }
  }
};

/// Arc position of a freshly spawned vehicle: its rear is arm_length away
/// from the box edge.
inline double spawn_position(const VehicleDims& dims)
{
  return 0.5 * dims.length;
}

//==============================================================================
using VehiclePair = std::pair<VehicleId, VehicleId>;

inline std::vector<VehiclePair> detect_collision(const Snapshot& X)
{
  std::vector<VehiclePair> out;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t k = i + 1; k < X.size(); ++k)
      if (disk_set_distance(occupancy(X[i]), occupancy(X[k])) == 0.0)
        out.emplace_back(X[i].id, X[k].id);
  return out;
}

inline std::vector<VehiclePair> congested_pairs(const Snapshot& X)
{
  std::vector<VehiclePair> out;
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t k = i + 1; k < X.size(); ++k)
      if (X[i].config.status == Status::Inside
        && X[k].config.status == Status::Inside
        && paths_conflict(X[i].path, X[k].path))
        out.emplace_back(X[i].id, X[k].id);
  return out;
}

inline bool detect_congestion(const Snapshot& X)
{
  return !congested_pairs(X).empty();
}

//==============================================================================
enum class EventKind { Collision, Congestion, Unlock, Departure, Timeout };

inline std::string_view to_string(EventKind k)
{
  switch (k)
  {
    case EventKind::Collision: return "collision";
    case EventKind::Congestion: return "congestion";
    case EventKind::Unlock: return "unlock";
    case EventKind::Departure: return "departure";
    case EventKind::Timeout: return "timeout";
  }
  return "?";
}

inline EventKind parse_event_kind(std::string_view s)
{
  for (const auto k : {EventKind::Collision, EventKind::Congestion,
      EventKind::Unlock, EventKind::Departure, EventKind::Timeout})
    if (to_string(k) == s)
      return k;
  throw std::invalid_argument("unknown event '" + std::string(s) + "'");
}

struct Event
{
  std::size_t step = 0;
  EventKind kind = EventKind::Collision;
  std::vector<VehicleId> vehicles;

  friend bool operator==(const Event&, const Event&) = default;
};

/// One trace row: the state of one vehicle at one step.
struct TraceRow
{
  std::size_t step = 0;
  VehicleId id = 0;
  DriverKind kind = DriverKind::Angelic;
  Arm arm = Arm::South;
  Maneuver maneuver = Maneuver::Straight;
  VehicleDims dims;
  Configuration config;
  /// Priority belief held after this step ("-" for irrational vehicles).
  std::string order;
  bool deadlock = false;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SimResult
{
  bool collided = false;
  bool congested = false;
  bool timed_out = false;
  /// Steps until the last vehicle started leaving; 0 unless the run ended
  /// normally.
  std::size_t total_steps = 0;
  /// Mean over vehicles of the step at which each started leaving.
  double mean_vehicle_steps = 0.0;
  std::size_t steps_run = 0;
  std::vector<VehiclePair> collisions;
  std::vector<TraceRow> trace;
  std::vector<Event> events;
};

//==============================================================================
struct SimOptions
{
  bool record_trace = true;
  GameObserver observer;
};

/// Intersection world advancing in fixed steps.
class World
{
public:
  struct Vehicle
  {
    VehicleSetup setup;
    NavigationPath path;
    Configuration config;
    AgentState agent;
    bool departed = false;
    std::optional<std::size_t> leaving_step;
  };

  World(const Scenario& scenario, SimConfig config)
  : _config(std::move(config))
  {
    scenario.validate();
    _config.validate();
    for (const auto& setup : scenario.vehicles)
    {
      Vehicle v;
      v.setup = setup;
      v.path = NavigationPath(setup.arm, setup.maneuver, _config.layout);
      v.config = make_configuration(
        spawn_position(setup.dims), setup.initial_speed, v.path, setup.dims);
      _vehicles.push_back(std::move(v));
    }
    const Snapshot X = participants();
    for (auto& v : _vehicles)
    {
      v.agent = make_agent(
        v.setup.id, v.setup.kind, X, _config.behavior,
        Rng::keyed({scenario.seed, scenario.run_index,
          static_cast<std::uint64_t>(v.setup.id), 2}));
    }
  }

  /// Vehicles still on their paths.
  Snapshot snapshot() const
  {
    Snapshot X;
    for (const auto& v : _vehicles)
      if (!v.departed)
        X.push_back(state_of(v));
    return X;
  }

  /// Vehicles that take part in decision making: those that have not left
  /// the intersection yet.
  Snapshot participants() const
  {
    Snapshot X;
    for (const auto& v : _vehicles)
      if (!v.departed && v.config.status != Status::Leaving)
        X.push_back(state_of(v));
    return X;
  }

  std::size_t time() const { return _t; }
  const std::vector<Vehicle>& vehicles() const { return _vehicles; }
  std::vector<Vehicle>& vehicles() { return _vehicles; }
  const SimConfig& config() const { return _config; }
  const Observations& last_observations() const { return _observed; }

  /// Decide, move, update beliefs, check safety. Returns the events of the
  /// new step.
  std::vector<Event> step(const GameObserver& observer = {})
  {
    const Snapshot X = participants();
    const auto table =
      std::make_shared<const DecisionTable>(X, _config.cost, _config.patterns);
    std::vector<Event> events;

    // 1. Decisions against the common snapshot X(t).
    std::vector<double> applied(_vehicles.size(), 0.0);
    for (std::size_t n = 0; n < _vehicles.size(); ++n)
    {
      auto& v = _vehicles[n];
      if (v.departed)
        continue;
      if (!is_rational(v.setup.kind))
      {
        applied[n] = irrational_decide(v.agent.rng, _config.behavior);
        continue;
      }
      const auto d = v.config.status == Status::Leaving
        ? decide(v.agent,
            std::make_shared<const DecisionTable>(
              Snapshot{state_of(v)}, _config.cost, _config.patterns),
            _observed, _config.behavior)
        : decide(v.agent, table, _observed, _config.behavior, observer);
      applied[n] = d.acceleration;
      if (d.unlocked)
        events.push_back({_t + 1, EventKind::Unlock, {v.setup.id}});
    }

    // 2-3. Motion and status.
    for (std::size_t n = 0; n < _vehicles.size(); ++n)
    {
      auto& v = _vehicles[n];
      if (v.departed)
        continue;
      v.config = next_config(
        v.config, applied[n], _config.cost.dt, v.path, v.setup.dims);
      if (v.config.status == Status::Leaving && !v.leaving_step)
        v.leaving_step = _t + 1;
    }
    ++_t;

    _observed.clear();
    std::vector<double> observed(X.size());
    for (std::size_t k = 0; k < X.size(); ++k)
    {
      observed[k] = infer_acceleration(
        X[k].config, vehicle(X[k].id).config, _config.cost.dt,
        _config.behavior.stop_deceleration);
      _observed.push_back({X[k].id, observed[k]});
    }

    const Snapshot after = snapshot();
    for (auto& v : _vehicles)
    {
      if (!v.departed && v.config.s >= v.path.total_length())
      {
        v.departed = true;
        events.push_back({_t, EventKind::Departure, {v.setup.id}});
      }
    }
    const Snapshot after_departures = participants();

    // 4. Priority maintenance.
    for (auto& v : _vehicles)
    {
      if (v.departed || !is_rational(v.setup.kind)
        || v.config.status == Status::Leaving)
        continue;
      const bool missed = predictions_missed(
        v.agent, _observed, _config.behavior.prediction_tolerance);
      auto result = maintain(
        v.setup.kind, v.setup.id, v.agent.order, table, after_departures,
        observed, missed, _config.behavior, v.agent.rng);
      v.agent.order = std::move(result.order);
    }

    // 5. Safety checks on X(t+1).
    for (const auto& [i, k] : detect_collision(after))
      events.push_back({_t, EventKind::Collision, {i, k}});
    for (const auto& [i, k] : congested_pairs(after))
      events.push_back({_t, EventKind::Congestion, {i, k}});

    return events;
  }

  bool all_leaving() const
  {
    return std::all_of(_vehicles.begin(), _vehicles.end(),
      [](const Vehicle& v) { return v.leaving_step.has_value(); });
  }

  void append_trace(std::vector<TraceRow>& rows) const
  {
    for (const auto& v : _vehicles)
    {
      if (v.departed)
        continue;
      rows.push_back({_t, v.setup.id, v.setup.kind, v.setup.arm,
        v.setup.maneuver, v.setup.dims, v.config,
        v.agent.order.empty() ? std::string("-") : v.agent.order.str(),
        v.agent.deadlock_flag});
    }
  }

private:
  static VehicleState state_of(const Vehicle& v)
  {
    return {v.setup.id, v.path, v.setup.dims, v.config};
  }

  Vehicle& vehicle(VehicleId id)
  {
    for (auto& v : _vehicles)
      if (v.setup.id == id)
        return v;
    throw std::out_of_range("World: unknown vehicle");
  }

  SimConfig _config;
  std::vector<Vehicle> _vehicles;
  std::size_t _t = 0;
  Observations _observed;
};

/// Simulate one scenario until every vehicle is leaving, a collision
/// happens, or the step cap is reached.
inline SimResult run(
  const Scenario& scenario, const SimConfig& config, const SimOptions& options = {})
{
  World world(scenario, config);
  SimResult result;
  if (options.record_trace)
    world.append_trace(result.trace);

  while (true)
  {
    auto events = world.step(options.observer);
    for (const auto& e : events)
    {
      if (e.kind == EventKind::Collision)
      {
        result.collided = true;
        result.collisions.emplace_back(e.vehicles[0], e.vehicles[1]);
      }
      if (e.kind == EventKind::Congestion)
        result.congested = true;
    }
    result.events.insert(result.events.end(), events.begin(), events.end());
    if (options.record_trace)
      world.append_trace(result.trace);

    if (result.collided)
      break;
    if (world.all_leaving())
    {
      double sum = 0.0;
      for (const auto& v : world.vehicles())
      {
        result.total_steps = std::max(result.total_steps, *v.leaving_step);
        sum += static_cast<double>(*v.leaving_step);
      }
      result.mean_vehicle_steps =
        sum / static_cast<double>(world.vehicles().size());
      break;
    }
    if (world.time() >= config.step_cap)
    {
      result.timed_out = true;
      result.events.push_back({world.time(), EventKind::Timeout, {}});
      break;
    }
  }
  result.steps_run = world.time();
  return result;
}

} // namespace isect

#endif // ISECT__SIM_HPP
