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

#ifndef ISECT__PRIORITY_HPP
#define ISECT__PRIORITY_HPP

#include "decision_game.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

namespace isect {

//==============================================================================
enum class DriverKind { Angelic = 0, Intermediate = 1, Demonic = 2, Irrational = 3 };

inline std::string_view to_string(DriverKind k)
{
  switch (k)
  {
    case DriverKind::Angelic: return "angelic";
    case DriverKind::Intermediate: return "intermediate";
    case DriverKind::Demonic: return "demonic";
    case DriverKind::Irrational: return "irrational";
  }
  return "?";
}

inline DriverKind parse_driver_kind(std::string_view s)
{
  for (const auto k : {DriverKind::Angelic, DriverKind::Intermediate,
      DriverKind::Demonic, DriverKind::Irrational})
    if (to_string(k) == s)
      return k;
  throw std::invalid_argument("unknown driver kind '" + std::string(s) + "'");
}

inline bool is_rational(DriverKind k) { return k != DriverKind::Irrational; }

//==============================================================================
/// Behavioural constants shared by the priority and agent logic.
struct BehaviorParams
{
  /// A vehicle is "significantly closer" when it is this much nearer to the
  /// intersection center [m].
  double closer_threshold = 2.0;
  /// Predictions within this many m/s^2 count as exact.
  double prediction_tolerance = 1e-6;
  /// Chance of adopting a fitted order that makes the vehicle bolder.
  double fit_acceptance_probability = 0.25;
  double unlock_probability = 0.25;
  double unlock_acceleration = 10.0;
  /// Deceleration reported for a vehicle that braked to a halt mid-step.
  double stop_deceleration = -50.0;
  std::vector<double> irrational_accelerations{-50.0, 0.0, 10.0, 20.0};

  void validate() const
  {
    const auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(fit_acceptance_probability)
      || !probability(unlock_probability))
      throw std::invalid_argument("BehaviorParams: probabilities in [0, 1]");
    if (!(prediction_tolerance >= 0.0))
      throw std::invalid_argument("BehaviorParams: negative tolerance");
    if (irrational_accelerations.empty())
      throw std::invalid_argument(
        "BehaviorParams: irrational acceleration set is empty");
  }

  friend bool operator==(const BehaviorParams&, const BehaviorParams&) = default;
};

//==============================================================================
enum class RightOfWayRule { AlreadyInside, FromTheLeft, SignificantlyCloser };

struct PrecedenceConstraint
{
  VehicleId before = 0;
  VehicleId after = 0;
  RightOfWayRule rule = RightOfWayRule::AlreadyInside;
  /// How far past the threshold a closeness constraint is [m].
  double margin = 0.0;
};

struct RightOfWayConstraints
{
  std::vector<PrecedenceConstraint> retained;
  std::vector<PrecedenceConstraint> dropped;
};

inline std::size_t count_not_leaving(const Snapshot& X)
{
  return static_cast<std::size_t>(std::count_if(X.begin(), X.end(),
    [](const VehicleState& v) { return v.config.status != Status::Leaving; }));
}

namespace detail {

inline bool reaches(
  const std::vector<PrecedenceConstraint>& edges, VehicleId from, VehicleId to)
{
  std::vector<VehicleId> stack{from};
  std::vector<VehicleId> seen;
  while (!stack.empty())
  {
    const VehicleId u = stack.back();
    stack.pop_back();
    if (u == to)
      return true;
    if (std::find(seen.begin(), seen.end(), u) != seen.end())
      continue;
    seen.push_back(u);
    for (const auto& e : edges)
      if (e.before == u)
        stack.push_back(e.after);
  }
  return false;
}

} // namespace detail

/// Pairwise precedence from the right-of-way rules. Each pair is decided by
/// the most important applicable rule: a vehicle already inside goes first;
/// otherwise, with fewer than four vehicles still approaching, the vehicle
/// from the left goes first; otherwise a significantly closer vehicle goes
/// first. Constraints that would close a cycle are dropped, lowest rule
/// first and, within the closeness rule, the one nearest the threshold
/// first.
inline RightOfWayConstraints right_of_way_constraints(
  const Snapshot& X, double closer_threshold = 2.0)
{
  std::vector<PrecedenceConstraint> candidates;
  const bool use_left_rule = count_not_leaving(X) < 4;

  for (std::size_t a = 0; a < X.size(); ++a)
  {
    for (std::size_t b = a + 1; b < X.size(); ++b)
    {
      const auto& j = X[a];
      const auto& k = X[b];
      if (j.config.status == Status::Leaving
        || k.config.status == Status::Leaving)
        continue;

      const bool j_in = j.config.status == Status::Inside;
      const bool k_in = k.config.status == Status::Inside;
      if (j_in != k_in)
      {
        candidates.push_back(j_in
          ? PrecedenceConstraint{j.id, k.id, RightOfWayRule::AlreadyInside}
          : PrecedenceConstraint{k.id, j.id, RightOfWayRule::AlreadyInside});
        continue;
      }

      const Arm ja = j.path.entry_arm();
      const Arm ka = k.path.entry_arm();
      if (use_left_rule && ja != ka && (left_of(ja, ka) || left_of(ka, ja)))
      {
        candidates.push_back(left_of(ja, ka)
          ? PrecedenceConstraint{j.id, k.id, RightOfWayRule::FromTheLeft}
          : PrecedenceConstraint{k.id, j.id, RightOfWayRule::FromTheLeft});
        continue;
      }

      const double dj = j.config.pose.position.norm();
      const double dk = k.config.pose.position.norm();
      if (dk - dj > closer_threshold)
      {
        candidates.push_back({j.id, k.id, RightOfWayRule::SignificantlyCloser,
          dk - dj - closer_threshold});
      }
      else if (dj - dk > closer_threshold)
      {
        candidates.push_back({k.id, j.id, RightOfWayRule::SignificantlyCloser,
          dj - dk - closer_threshold});
      }
    }
  }

  // Most important first; stable so pair order breaks remaining ties.
  std::stable_sort(candidates.begin(), candidates.end(),
    [](const PrecedenceConstraint& l, const PrecedenceConstraint& r)
    {
      if (l.rule != r.rule)
        return l.rule < r.rule;
      return l.margin > r.margin;
    });

  RightOfWayConstraints out;
  for (const auto& c : candidates)
  {
    if (detail::reaches(out.retained, c.after, c.before))
      out.dropped.push_back(c);
    else
      out.retained.push_back(c);
  }
  return out;
}

inline bool satisfies(
  const PriorityOrder& order, std::span<const PrecedenceConstraint> constraints)
{
  return std::all_of(constraints.begin(), constraints.end(),
    [&](const PrecedenceConstraint& c)
    { return order.precedes(c.before, c.after); });
}

/// All permutations of `ids` in lexicographic order.
inline std::vector<PriorityOrder> all_orders(std::vector<VehicleId> ids)
{
  if (ids.size() > 8)
    throw std::length_error("all_orders: too many vehicles");
  std::sort(ids.begin(), ids.end());
  std::vector<PriorityOrder> out;
  do
  {
    out.emplace_back(ids);
  } while (std::next_permutation(ids.begin(), ids.end()));
  return out;
}

/// Uniformly random total order over the vehicles not yet leaving,
/// consistent with the right-of-way rules.
inline PriorityOrder init_angelic(
  const Snapshot& X, Rng& rng, double closer_threshold = 2.0)
{
  const auto constraints = right_of_way_constraints(X, closer_threshold);
  std::vector<PriorityOrder> valid;
  for (auto& order : all_orders(player_ids(X)))
    if (satisfies(order, constraints.retained))
      valid.push_back(std::move(order));
  // The retained constraints are acyclic, so at least one extension exists.
  return valid[rng.below(valid.size())];
}

/// Uniformly random total order with `self` first.
inline PriorityOrder init_selfish(
  VehicleId self, std::vector<VehicleId> ids, Rng& rng)
{
  const auto it = std::find(ids.begin(), ids.end(), self);
  if (it == ids.end())
    throw std::invalid_argument("init_selfish: self not among the vehicles");
  ids.erase(it);
  std::sort(ids.begin(), ids.end());
  rng.shuffle(ids.begin(), ids.end());
  ids.insert(ids.begin(), self);
  return PriorityOrder(std::move(ids));
}

/// True iff some vehicle present in both snapshots changed status.
inline bool right_of_way_changed(const Snapshot& previous, const Snapshot& current)
{
  for (const auto& v : current)
  {
    const auto i = index_of(previous, v.id);
    if (i && previous[*i].config.status != v.config.status)
      return true;
  }
  return false;
}

//==============================================================================
/// Acceleration an observer would infer after vehicle k of the table's
/// snapshot applies `a` for one step. Brake-to-halt and standstill commands
/// collapse to what is observable.
inline double effective_acceleration(
  const DecisionTable& table, std::size_t k, double a, double stop_deceleration)
{
  const auto& v = table.snapshot()[k];
  const double dt = table.params().dt;
  return infer_acceleration(
    v.config, next_config(v.config, a, dt, v.path, v.dims), dt,
    stop_deceleration);
}

struct FitResult
{
  PriorityOrder order;
  /// Order that best explains the observations (before acceptance).
  PriorityOrder best_fit;
  double best_score = 0.0;
  /// True iff acceptance required the coin flip.
  bool probabilistic = false;
};

/// Replace `current` by the order whose equilibrium best explains the
/// accelerations observed during the last step. `observed` is indexed like
/// the table's snapshot.
inline FitResult fit_order(
  const std::shared_ptr<const DecisionTable>& table,
  std::span<const double> observed,
  const PriorityOrder& current,
  VehicleId self,
  const BehaviorParams& behavior,
  Rng& rng)
{
  const Snapshot& X = table->snapshot();
  if (player_ids(X).size() > 6)
    throw std::length_error("fit_order: too many vehicles to enumerate orders");
  if (observed.size() != X.size())
    throw std::invalid_argument("fit_order: one observation per vehicle");
  const auto self_index = index_of(X, self);
  if (!self_index)
    throw std::invalid_argument("fit_order: self not in snapshot");

  struct Candidate
  {
    PriorityOrder order;
    double score;
    double self_head;
  };

  std::vector<Candidate> candidates;
  double current_self_head = 0.0;
  for (auto& order : all_orders(player_ids(X)))
  {
    const auto eq = solve(DecisionGame(table, order));
    double score = 0.0;
    for (std::size_t j = 0; j < X.size(); ++j)
    {
      score += std::abs(
        effective_acceleration(*table, j, eq.head[j], behavior.stop_deceleration)
        - observed[j]);
    }
    if (order == current)
      current_self_head = eq.head[*self_index];
    candidates.push_back({std::move(order), score, eq.head[*self_index]});
  }

  double best_score = candidates.front().score;
  for (const auto& c : candidates)
    best_score = std::min(best_score, c.score);

  const Candidate* chosen = nullptr;
  for (const auto& c : candidates)
  {
    if (c.score > best_score + behavior.prediction_tolerance)
      continue;
    if (!chosen || c.self_head < chosen->self_head
      || (c.self_head == chosen->self_head && c.order == current))
      chosen = &c;
  }

  FitResult out;
  out.best_fit = chosen->order;
  out.best_score = chosen->score;
  if (chosen->self_head <= current_self_head)
  {
    out.order = chosen->order;
  }
  else
  {
    out.probabilistic = true;
    out.order = rng.bernoulli(behavior.fit_acceptance_probability)
      ? chosen->order : current;
  }
  return out;
}

//==============================================================================
enum class PriorityUpdate { None, RightOfWay, Fitting };

struct MaintainResult
{
  PriorityOrder order;
  PriorityUpdate update = PriorityUpdate::None;
};

/// One step of priority maintenance for a rational vehicle. `previous` holds
/// the decision table of the snapshot the last decisions were made on,
/// `current` the snapshot after the step, and `observed` the accelerations
/// inferred from that step (indexed like previous). The returned order
/// covers exactly the vehicles of `current` that are not leaving.
inline MaintainResult maintain(
  DriverKind kind,
  VehicleId self,
  const PriorityOrder& order,
  const std::shared_ptr<const DecisionTable>& previous,
  const Snapshot& current,
  std::span<const double> observed,
  bool predictions_missed,
  const BehaviorParams& behavior,
  Rng& rng)
{
  const auto present = player_ids(current);
  switch (kind)
  {
    case DriverKind::Irrational:
      throw std::logic_error("maintain: irrational vehicles keep no order");
    case DriverKind::Demonic:
      return {order.restricted_to(present), PriorityUpdate::None};
    case DriverKind::Angelic:
      if (right_of_way_changed(previous->snapshot(), current))
      {
        return {init_angelic(current, rng, behavior.closer_threshold),
          PriorityUpdate::RightOfWay};
      }
      [[fallthrough]];
    case DriverKind::Intermediate:
      if (predictions_missed)
      {
        const auto fit =
          fit_order(previous, observed, order, self, behavior, rng);
        return {fit.order.restricted_to(present), PriorityUpdate::Fitting};
      }
      return {order.restricted_to(present), PriorityUpdate::None};
  }
  return {order, PriorityUpdate::None};
}

} // namespace isect

#endif // ISECT__PRIORITY_HPP
