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

#ifndef ISECT__AGENT_HPP
#define ISECT__AGENT_HPP

#include "priority.hpp"

#include <functional>
#include <optional>

namespace isect {

//==============================================================================
/// Acceleration of one vehicle inferred from the last step.
struct Observation
{
  VehicleId id = 0;
  double acceleration = 0.0;
};

using Observations = std::vector<Observation>;

inline std::optional<double> observed_for(const Observations& obs, VehicleId id)
{
  for (const auto& o : obs)
    if (o.id == id)
      return o.acceleration;
  return std::nullopt;
}

/// What a vehicle expects another vehicle to do during the current step.
struct Prediction
{
  VehicleId id = 0;
  /// Head of the predicted equilibrium pattern.
  double acceleration = 0.0;
  /// Predicted configuration after the step.
  Configuration config;
  /// Acceleration an observer would infer from that configuration.
  double observable = 0.0;
};

struct AgentState
{
  VehicleId id = 0;
  DriverKind kind = DriverKind::Angelic;
  /// Empty for irrational vehicles.
  PriorityOrder order;
  std::vector<Prediction> predictions;
  bool deadlock_flag = false;
  Rng rng;
};

/// Fresh agent with its initial priority belief.
inline AgentState make_agent(
  VehicleId id,
  DriverKind kind,
  const Snapshot& X,
  const BehaviorParams& behavior,
  Rng rng)
{
  AgentState agent{id, kind, {}, {}, false, std::move(rng)};
  switch (kind)
  {
    case DriverKind::Angelic:
      agent.order = init_angelic(X, agent.rng, behavior.closer_threshold);
      break;
    case DriverKind::Intermediate:
    case DriverKind::Demonic:
      agent.order = init_selfish(id, player_ids(X), agent.rng);
      break;
    case DriverKind::Irrational:
      break;
  }
  return agent;
}

//==============================================================================
/// Deadlock as seen by `agent`: every vehicle not yet leaving is stopped and
/// did exactly what the agent predicted during the last step.
inline bool detect_deadlock(
  const AgentState& agent,
  const Snapshot& X,
  const Observations& observed,
  double tolerance)
{
  if (agent.predictions.empty())
    return false;
  for (const auto& v : X)
    if (v.config.status != Status::Leaving && v.config.v != 0.0)
      return false;
  for (const auto& v : X)
  {
    if (v.config.status == Status::Leaving)
      continue;
    const auto obs = observed_for(observed, v.id);
    const auto pred = std::find_if(
      agent.predictions.begin(), agent.predictions.end(),
      [&](const Prediction& p) { return p.id == v.id; });
    if (!obs || pred == agent.predictions.end())
      return false;
    if (std::abs(pred->observable - *obs) > tolerance)
      return false;
  }
  return true;
}

/// Probabilistic deadlock breaker. Eligible when a deadlock is detected now
/// and the agent believes it has the highest priority, or when a deadlock
/// was already detected at the previous step. Records the current detection.
inline std::optional<double> unlock(
  AgentState& agent, bool deadlock_now, const BehaviorParams& behavior)
{
  const bool eligible =
    (deadlock_now && !agent.order.empty() && agent.order.minimal() == agent.id)
    || agent.deadlock_flag;
  agent.deadlock_flag = deadlock_now;
  if (eligible && agent.rng.bernoulli(behavior.unlock_probability))
    return behavior.unlock_acceleration;
  return std::nullopt;
}

/// Uniform choice from the irrational acceleration set. Takes nothing but
/// the random stream: irrational vehicles ignore the traffic.
inline double irrational_decide(Rng& rng, const BehaviorParams& behavior)
{
  const auto& choices = behavior.irrational_accelerations;
  return choices[rng.below(choices.size())];
}

//==============================================================================
struct Decision
{
  double acceleration = 0.0;
  bool deadlock = false;
  bool unlocked = false;
};

/// Called with every game a rational vehicle solves and the profile it
/// obtained.
using GameObserver =
  std::function<void(const DecisionGame&, const StrategyProfile&)>;

/// Control input of a rational vehicle for the snapshot held by `table`.
/// Also refreshes the agent's predictions of every vehicle.
inline Decision decide(
  AgentState& agent,
  const std::shared_ptr<const DecisionTable>& table,
  const Observations& observed,
  const BehaviorParams& behavior,
  const GameObserver& observer = {})
{
  if (!is_rational(agent.kind))
    throw std::logic_error("decide: irrational vehicles do not solve games");

  const Snapshot& X = table->snapshot();
  const auto self = index_of(X, agent.id);
  if (!self)
    throw std::invalid_argument("decide: agent not in snapshot");

  Decision d;
  if (X[*self].config.status == Status::Leaving)
  {
    // Past the box the vehicle no longer competes; only the speed limit
    // matters.
    agent.order = PriorityOrder();
    agent.predictions.clear();
    agent.deadlock_flag = false;
    d.acceleration = table->patterns()[table->solo_pattern(*self)].front();
    return d;
  }
  d.deadlock = detect_deadlock(agent, X, observed, behavior.prediction_tolerance);

  const DecisionGame game(table, agent.order);
  const auto profile = solve_backward_induction(game);
  if (observer)
    observer(game, profile);
  const auto eq = equilibrium_of(game, profile);

  agent.predictions.clear();
  const double dt = table->params().dt;
  for (std::size_t k = 0; k < X.size(); ++k)
  {
    Prediction p;
    p.id = X[k].id;
    p.acceleration = eq.head[k];
    p.config =
      next_config(X[k].config, p.acceleration, dt, X[k].path, X[k].dims);
    p.observable = infer_acceleration(
      X[k].config, p.config, dt, behavior.stop_deceleration);
    agent.predictions.push_back(p);
  }

  d.acceleration = eq.head[*self];
  if (const auto override_acc = unlock(agent, d.deadlock, behavior))
  {
    d.acceleration = *override_acc;
    d.unlocked = true;
  }
  return d;
}

/// True iff some other vehicle's observed acceleration differs from the
/// agent's prediction.
inline bool predictions_missed(
  const AgentState& agent, const Observations& observed, double tolerance)
{
  for (const auto& p : agent.predictions)
  {
    if (p.id == agent.id)
      continue;
    const auto obs = observed_for(observed, p.id);
    if (obs && std::abs(p.observable - *obs) > tolerance)
      return true;
  }
  return false;
}

} // namespace isect

#endif // ISECT__AGENT_HPP
