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

#ifndef ISECT__DECISION_GAME_HPP
#define ISECT__DECISION_GAME_HPP

#include "cost.hpp"
#include "game.hpp"

#include <array>
#include <memory>

namespace isect {

//==============================================================================
/// Horizon rollouts of every vehicle under every pattern for one snapshot.
/// Vehicles move independently of each other, so the configuration of k
/// after s steps depends only on k's own pattern; pairwise distances are
/// tabulated once and shared by every priority order. Costs read from the
/// table are bitwise identical to accumulated_cost().
class DecisionTable
{
public:
  static constexpr std::size_t max_vehicles = 8;

  DecisionTable(Snapshot X, CostParams params, PatternSet patterns)
  : _X(std::move(X)),
    _params(params),
    _patterns(std::move(patterns))
  {
    _params.validate();
    const std::size_t n = _X.size();
    const std::size_t m = _patterns.size();
    const std::size_t h = _patterns.horizon();
    if (n > max_vehicles)
      throw std::invalid_argument("DecisionTable: too many vehicles");

    _configs.resize(n * m * h);
    std::vector<DiskSet> disks(n * m * h);
    for (std::size_t k = 0; k < n; ++k)
    {
      for (std::size_t p = 0; p < m; ++p)
      {
        Configuration c = _X[k].config;
        for (std::size_t s = 0; s < h; ++s)
        {
          if (s > 0)
          {
            c = next_config(
              c, _patterns[p][s - 1], _params.dt, _X[k].path, _X[k].dims);
          }
          _configs[config_index(k, p, s)] = c;
          disks[config_index(k, p, s)] = occupancy_disks(
            c.pose, _X[k].dims.length, _X[k].dims.width);
        }
      }
    }

    _conflict.assign(n * n, false);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (j != k)
          _conflict[j * n + k] = paths_conflict(_X[j].path, _X[k].path);

    _distance.assign(h * n * m * n * m, 0.0);
    for (std::size_t s = 0; s < h; ++s)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t p = 0; p < m; ++p)
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t q = 0; q < m; ++q)
              if (j != k)
              {
                _distance[distance_index(s, j, p, k, q)] = disk_set_distance(
                  disks[config_index(k, q, s)], disks[config_index(j, p, s)]);
              }

    _solo.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k)
    {
      double best = 0.0;
      for (std::size_t p = 0; p < m; ++p)
      {
        double total = 0.0;
        for (std::size_t s = 0; s < h; ++s)
          total += discount(_params.lambda, s)
            * velocity_feature(predicted(k, p, s).v, _params);
        if (p == 0 || total < best)
        {
          best = total;
          _solo[k] = p;
        }
      }
    }
  }

  const Snapshot& snapshot() const { return _X; }
  const CostParams& params() const { return _params; }
  const PatternSet& patterns() const { return _patterns; }
  std::size_t vehicle_count() const { return _X.size(); }

  /// Configuration of vehicle k after s steps of pattern p.
  const Configuration& predicted(
    std::size_t k, std::size_t p, std::size_t s) const
  {
    return _configs[config_index(k, p, s)];
  }

  /// Pattern minimizing the velocity cost of vehicle k alone. A leaving
  /// vehicle bears no safety cost, so this is its dominant strategy.
  std::size_t solo_pattern(std::size_t k) const { return _solo[k]; }

  /// Accumulated cost of vehicle j when vehicle k plays pattern choice[k].
  double cost(
    std::size_t j, std::span<const std::size_t> choice, bool j_minimal) const
  {
    const std::size_t n = _X.size();
    double total = 0.0;
    for (std::size_t s = 0; s < _patterns.horizon(); ++s)
    {
      const Configuration& cj = predicted(j, choice[j], s);
      double safety = 0.0;
      for (std::size_t k = 0; k < n; ++k)
      {
        if (k == j)
          continue;
        safety += safety_term(
          cj.status,
          _conflict[j * n + k],
          _distance[distance_index(s, j, choice[j], k, choice[k])],
          j_minimal,
          _params);
      }
      total += discount(_params.lambda, s)
        * (safety + velocity_feature(cj.v, _params));
    }
    return total;
  }

private:
  std::size_t config_index(std::size_t k, std::size_t p, std::size_t s) const
  {
    return (k * _patterns.size() + p) * _patterns.horizon() + s;
  }

  std::size_t distance_index(
    std::size_t s, std::size_t j, std::size_t p,
    std::size_t k, std::size_t q) const
  {
    const std::size_t n = _X.size();
    const std::size_t m = _patterns.size();
    return (((s * n + j) * m + p) * n + k) * m + q;
  }

  Snapshot _X;
  CostParams _params;
  PatternSet _patterns;
  std::vector<Configuration> _configs;
  std::vector<bool> _conflict;
  std::vector<double> _distance;
  std::vector<std::size_t> _solo;
};

//==============================================================================
/// The decision game G(X, order): players are the vehicles not yet leaving,
/// listed in priority order (highest priority decides first), strategies
/// are the patterns and costs are accumulated costs. Leaving vehicles stay
/// in the scene as obstacles playing their dominant pattern.
class DecisionGame
{
public:
  DecisionGame(std::shared_ptr<const DecisionTable> table, PriorityOrder order)
  : _table(std::move(table)),
    _order(std::move(order))
  {
    const Snapshot& X = _table->snapshot();
    if (!_order.covers(player_ids(X)))
      throw std::invalid_argument(
        "DecisionGame: order must cover exactly the vehicles not leaving");
    for (const auto id : _order.ids())
      _players.push_back(*index_of(X, id));
    for (std::size_t k = 0; k < X.size(); ++k)
      _fixed[k] = _table->solo_pattern(k);
  }

  std::size_t player_count() const { return _players.size(); }
  std::size_t strategy_count() const { return _table->patterns().size(); }

  double cost(std::size_t player, std::span<const std::size_t> profile) const
  {
    auto choice = _fixed;
    for (std::size_t p = 0; p < _players.size(); ++p)
      choice[_players[p]] = profile[p];
    return _table->cost(
      _players[player],
      std::span<const std::size_t>(choice.data(), _table->vehicle_count()),
      player == 0);
  }

  const DecisionTable& table() const { return *_table; }
  const PriorityOrder& order() const { return _order; }

  /// Snapshot index of the player deciding at position p.
  std::size_t snapshot_index(std::size_t p) const { return _players[p]; }

  /// Pattern of snapshot vehicle k when it is not a player.
  std::size_t fixed_pattern(std::size_t k) const { return _fixed[k]; }

private:
  std::shared_ptr<const DecisionTable> _table;
  PriorityOrder _order;
  std::vector<std::size_t> _players;
  std::array<std::size_t, DecisionTable::max_vehicles> _fixed{};
};

static_assert(SequentialGame<DecisionGame>);

inline DecisionGame build_decision_game(
  const Snapshot& X,
  const PriorityOrder& order,
  const CostParams& params,
  const PatternSet& patterns)
{
  return DecisionGame(
    std::make_shared<const DecisionTable>(X, params, patterns), order);
}

//==============================================================================
/// Backward-induction outcome of a decision game, re-indexed by vehicle.
struct Equilibrium
{
  /// Pattern index per vehicle, indexed like the snapshot.
  std::vector<std::size_t> pattern_of;
  /// First acceleration of each vehicle's pattern, indexed like the snapshot.
  std::vector<double> head;
};

inline Equilibrium equilibrium_of(
  const DecisionGame& game, const StrategyProfile& profile)
{
  Equilibrium eq;
  const std::size_t n = game.table().vehicle_count();
  eq.pattern_of.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    eq.pattern_of[k] = game.fixed_pattern(k);
  for (std::size_t p = 0; p < game.player_count(); ++p)
    eq.pattern_of[game.snapshot_index(p)] = profile[p];
  eq.head.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    eq.head[k] = game.table().patterns()[eq.pattern_of[k]].front();
  return eq;
}

inline Equilibrium solve(const DecisionGame& game)
{
  return equilibrium_of(game, solve_backward_induction(game));
}

} // namespace isect

#endif // ISECT__DECISION_GAME_HPP
