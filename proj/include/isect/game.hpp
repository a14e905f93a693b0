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

#ifndef ISECT__GAME_HPP
#define ISECT__GAME_HPP

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace isect {

//==============================================================================
/// Strategy index chosen by each player, listed in decision order.
using StrategyProfile = std::vector<std::size_t>;

/// A finite 1-round sequential game with perfect information. Player 0
/// decides first; every player draws from the same strategy set and
/// `cost(p, profile)` is the cost of player p under a complete profile.
template<typename G>
concept SequentialGame = requires(
  const G& g, std::size_t p, std::span<const std::size_t> profile)
{
  { g.player_count() } -> std::convertible_to<std::size_t>;
  { g.strategy_count() } -> std::convertible_to<std::size_t>;
  { g.cost(p, profile) } -> std::convertible_to<double>;
};

//==============================================================================
/// Game given by an explicit cost table. Profiles are ranked in mixed radix
/// with player 0 as the most significant digit.
class TabularGame
{
public:
  TabularGame(
    std::size_t players,
    std::size_t strategies,
    std::vector<std::vector<double>> costs)
  : _players(players),
    _strategies(strategies),
    _costs(std::move(costs))
  {
    if (players < 1 || strategies < 1)
      throw std::invalid_argument("TabularGame: empty game");
    std::size_t profiles = 1;
    for (std::size_t p = 0; p < players; ++p)
      profiles *= strategies;
    if (_costs.size() != players)
      throw std::invalid_argument("TabularGame: one cost row per player");
    for (const auto& row : _costs)
      if (row.size() != profiles)
        throw std::invalid_argument("TabularGame: cost row size mismatch");
  }

  std::size_t player_count() const { return _players; }
  std::size_t strategy_count() const { return _strategies; }

  std::size_t rank(std::span<const std::size_t> profile) const
  {
    std::size_t index = 0;
    for (const auto s : profile)
      index = index * _strategies + s;
    return index;
  }

  double cost(std::size_t player, std::span<const std::size_t> profile) const
  {
    return _costs[player][rank(profile)];
  }

private:
  std::size_t _players;
  std::size_t _strategies;
  std::vector<std::vector<double>> _costs;
};

/// Game whose costs come from a callable.
class FunctionGame
{
public:
  using CostFn =
    std::function<double(std::size_t, std::span<const std::size_t>)>;

  FunctionGame(std::size_t players, std::size_t strategies, CostFn cost)
  : _players(players), _strategies(strategies), _cost(std::move(cost))
  {}

  std::size_t player_count() const { return _players; }
  std::size_t strategy_count() const { return _strategies; }
  double cost(std::size_t player, std::span<const std::size_t> profile) const
  {
    return _cost(player, profile);
  }

private:
  std::size_t _players;
  std::size_t _strategies;
  CostFn _cost;
};

//==============================================================================
namespace detail {

template<SequentialGame G>
void backward_induction_from(
  const G& game,
  std::size_t depth,
  StrategyProfile& profile,
  std::size_t& evaluations)
{
  const std::size_t n = game.player_count();
  if (depth == n)
    return;

  double best_cost = std::numeric_limits<double>::infinity();
  StrategyProfile best;
  for (std::size_t s = 0; s < game.strategy_count(); ++s)
  {
    profile[depth] = s;
    backward_induction_from(game, depth + 1, profile, evaluations);
    const double c = game.cost(depth, profile);
    ++evaluations;
    // Strict comparison keeps the earliest strategy on ties.
    if (best.empty() || c < best_cost)
    {
      best_cost = c;
      best.assign(profile.begin() + depth, profile.end());
    }
  }
  std::copy(best.begin(), best.end(), profile.begin() + depth);
}

} // namespace detail

/// Subgame-perfect profile computed by backward induction. Each player picks
/// the strategy minimizing its own cost given the earlier choices and the
/// best responses of the later players; ties go to the lowest index.
template<SequentialGame G>
StrategyProfile solve_backward_induction(
  const G& game, std::size_t* evaluations = nullptr)
{
  if (game.player_count() < 1 || game.strategy_count() < 1)
    throw std::invalid_argument("solve_backward_induction: empty game");

  StrategyProfile profile(game.player_count(), 0);
  std::size_t count = 0;
  detail::backward_induction_from(game, 0, profile, count);
  if (evaluations)
    *evaluations = count;
  return profile;
}

/// Reference solver: tabulates every profile, then folds the game tree
/// level by level from the leaves. Refuses games with more than
/// `max_profiles` profiles.
template<SequentialGame G>
StrategyProfile exhaustive_solve(
  const G& game, std::size_t max_profiles = std::size_t{1} << 20)
{
  const std::size_t n = game.player_count();
  const std::size_t m = game.strategy_count();
  if (n < 1 || m < 1)
    throw std::invalid_argument("exhaustive_solve: empty game");

  std::size_t leaves = 1;
  for (std::size_t p = 0; p < n; ++p)
  {
    if (leaves > max_profiles / m)
      throw std::length_error("exhaustive_solve: game too large to enumerate");
    leaves *= m;
  }

  const auto unrank = [&](std::size_t index)
  {
    StrategyProfile profile(n);
    for (std::size_t p = n; p-- > 0;)
    {
      profile[p] = index % m;
      index /= m;
    }
    return profile;
  };

  // costs[p][leaf]
  std::vector<std::vector<double>> costs(n, std::vector<double>(leaves));
  for (std::size_t leaf = 0; leaf < leaves; ++leaf)
  {
    const auto profile = unrank(leaf);
    for (std::size_t p = 0; p < n; ++p)
      costs[p][leaf] = game.cost(p, profile);
  }

  // outcome[prefix] = leaf reached from the node identified by `prefix`.
  std::vector<std::size_t> outcome(leaves);
  for (std::size_t leaf = 0; leaf < leaves; ++leaf)
    outcome[leaf] = leaf;

  std::size_t nodes = leaves;
  for (std::size_t depth = n; depth-- > 0;)
  {
    nodes /= m;
    std::vector<std::size_t> parent(nodes);
    for (std::size_t node = 0; node < nodes; ++node)
    {
      std::size_t chosen = outcome[node * m];
      for (std::size_t s = 1; s < m; ++s)
      {
        const std::size_t candidate = outcome[node * m + s];
        if (costs[depth][candidate] < costs[depth][chosen])
          chosen = candidate;
      }
      parent[node] = chosen;
    }
    outcome = std::move(parent);
  }

  return unrank(outcome.front());
}

/// True iff no unilateral deviation of the last player strictly lowers its
/// cost.
template<SequentialGame G>
bool last_mover_optimal(const G& game, std::span<const std::size_t> profile)
{
  const std::size_t last = game.player_count() - 1;
  StrategyProfile probe(profile.begin(), profile.end());
  const double chosen = game.cost(last, probe);
  for (std::size_t s = 0; s < game.strategy_count(); ++s)
  {
    probe[last] = s;
    if (game.cost(last, probe) < chosen)
      return false;
  }
  return true;
}

} // namespace isect

#endif // ISECT__GAME_HPP
