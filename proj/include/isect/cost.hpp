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

#ifndef ISECT__COST_HPP
#define ISECT__COST_HPP

#include "snapshot.hpp"

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace isect {

//==============================================================================
struct CostParams
{
  double C_n = 20.0;
  double C_d = 1e300;
  double C_u = 1.0;
  double C_o = 1000.0;
  double D = 25.0;
  double D_danger = 0.5;
  double v_l = 16.7;
  double lambda = 0.8;
  std::size_t h = 3;
  double dt = 0.1;

  void validate() const
  {
    if (!(C_n > 0.0 && C_d > C_n))
      throw std::invalid_argument("CostParams: need 0 < C_n < C_d");
    if (!(C_u > 0.0 && C_o > C_u))
      throw std::invalid_argument("CostParams: need 0 < C_u < C_o");
    if (!(D_danger > 0.0 && D > D_danger))
      throw std::invalid_argument("CostParams: need 0 < D_danger < D");
    if (!(lambda >= 0.0 && lambda <= 1.0))
      throw std::invalid_argument("CostParams: lambda must lie in [0, 1]");
    if (h < 1)
      throw std::invalid_argument("CostParams: h must be >= 1");
    if (!(dt > 0.0))
      throw std::invalid_argument("CostParams: dt must be > 0");
    if (!(v_l > 0.0))
      throw std::invalid_argument("CostParams: v_l must be > 0");
  }

  friend bool operator==(const CostParams&, const CostParams&) = default;
};

//==============================================================================
/// A strategy: one acceleration per step of the horizon.
using Pattern = std::vector<double>;

/// Finite set of acceleration patterns shared by all players. The listed
/// order is the tie-breaking order of the solver.
class PatternSet
{
public:
  PatternSet()
  : PatternSet({{-50, -50, -50}, {0, 0, 0}, {10, 0, 0}, {20, 0, 0}})
  {}

  PatternSet(std::vector<Pattern> patterns)
  : _patterns(std::move(patterns))
  {
    if (_patterns.empty())
      throw std::invalid_argument("PatternSet: at least one pattern required");
    for (const auto& p : _patterns)
    {
      if (p.empty() || p.size() != _patterns.front().size())
        throw std::invalid_argument(
          "PatternSet: patterns must share a non-zero length");
    }
  }

  std::size_t size() const { return _patterns.size(); }
  std::size_t horizon() const { return _patterns.front().size(); }
  const Pattern& operator[](std::size_t i) const { return _patterns.at(i); }
  const std::vector<Pattern>& patterns() const { return _patterns; }

  /// True iff `a` is the first element of some pattern.
  bool is_head(double a) const
  {
    for (const auto& p : _patterns)
      if (p.front() == a)
        return true;
    return false;
  }

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

private:
  std::vector<Pattern> _patterns;
};

//==============================================================================
/// Proximity penalty of vehicle i with respect to one opponent, given the
/// quantities it depends on. Cases are tried top to bottom.
inline double safety_term(
  Status status_i,
  bool paths_may_collide,
  double distance,
  bool i_minimal,
  const CostParams& params)
{
  if (status_i == Status::Leaving)
    return 0.0;
  if (!paths_may_collide)
    return 0.0;
  if (distance >= params.D)
    return 0.0;
  const double gap = params.D - distance;
  if (distance <= params.D_danger)
    return params.C_d * gap * gap;
  if (i_minimal)
    return 0.0;
  return params.C_n * gap * gap;
}

inline bool is_minimal(
  const Snapshot& X, std::size_t i, const PriorityOrder& order)
{
  return !order.empty() && order.minimal() == X[i].id;
}

inline double safety_pair(
  std::size_t i,
  std::size_t k,
  const Snapshot& X,
  const PriorityOrder& order,
  const CostParams& params)
{
  if (i == k)
    throw std::invalid_argument("safety_pair: i and k must differ");
  return safety_term(
    X[i].config.status,
    paths_conflict(X[i].path, X[k].path),
    disk_set_distance(occupancy(X[k]), occupancy(X[i])),
    is_minimal(X, i, order),
    params);
}

inline double safety_feature(
  std::size_t i,
  const Snapshot& X,
  const PriorityOrder& order,
  const CostParams& params)
{
  double total = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k)
    if (k != i)
      total += safety_pair(i, k, X, order, params);
  return total;
}

inline double velocity_feature(double v, const CostParams& params)
{
  const double diff = params.v_l - v;
  return (v <= params.v_l ? params.C_u : params.C_o) * diff * diff;
}

inline double step_cost(
  std::size_t i,
  const Snapshot& X,
  const PriorityOrder& order,
  const CostParams& params)
{
  return safety_feature(i, X, order, params)
    + velocity_feature(X[i].config.v, params);
}

/// Weight of the s-th term of the horizon sum. 0^0 is 1.
inline double discount(double lambda, std::size_t s)
{
  return std::pow(lambda, static_cast<double>(s));
}

/// Advance every vehicle by one step with the given accelerations (indexed
/// like X).
inline Snapshot advance(
  const Snapshot& X, std::span<const double> accelerations, double dt)
{
  if (accelerations.size() != X.size())
    throw std::invalid_argument("advance: one acceleration per vehicle");
  Snapshot out = X;
  for (std::size_t k = 0; k < X.size(); ++k)
  {
    out[k].config = next_config(
      X[k].config, accelerations[k], dt, X[k].path, X[k].dims);
  }
  return out;
}

/// Discounted sum of step costs of vehicle j over the horizon when every
/// vehicle k follows patterns[choice[k]].
inline double accumulated_cost(
  std::size_t j,
  const Snapshot& X,
  const PriorityOrder& order,
  std::span<const std::size_t> choice,
  const PatternSet& patterns,
  const CostParams& params)
{
  if (choice.size() != X.size())
    throw std::invalid_argument("accumulated_cost: one pattern per vehicle");

  const std::size_t h = patterns.horizon();
  double total = 0.0;
  Snapshot current = X;
  std::vector<double> accelerations(X.size());
  for (std::size_t s = 0; s < h; ++s)
  {
    total += discount(params.lambda, s) * step_cost(j, current, order, params);
    if (s + 1 == h)
      break;
    for (std::size_t k = 0; k < X.size(); ++k)
      accelerations[k] = patterns[choice[k]][s];
    current = advance(current, accelerations, params.dt);
  }
  return total;
}

} // namespace isect

#endif // ISECT__COST_HPP
