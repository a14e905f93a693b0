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


#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <chrono>

using namespace isect;
using namespace isect::test;
using Catch::Matchers::WithinRel;

namespace {

const CostParams params;
const PatternSet patterns;

// Velocity-only cost of a lone vehicle starting at rest, by hand.
double lone_cost(double a0)
{
  const double v1 = std::max(0.0, a0 * 0.1);
  const auto vel = [](double v) { return (16.7 - v) * (16.7 - v); };
  return vel(0.0) + 0.8 * vel(v1) + 0.64 * vel(v1);
}

} // namespace

TEST_CASE("lone vehicle at rest takes the strong acceleration", "[decision]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 15.0)};
  const auto game = build_decision_game(X, PriorityOrder({1}), params, patterns);
  for (std::size_t p = 0; p < patterns.size(); ++p)
  {
    const StrategyProfile profile{p};
    CHECK_THAT(game.cost(0, profile), WithinRel(lone_cost(patterns[p].front()), 1e-12));
  }
  const auto eq = solve(game);
  CHECK(eq.pattern_of == std::vector<std::size_t>{3});
  CHECK(eq.head == std::vector<double>{20.0});
}

TEST_CASE("table costs equal accumulated costs", "[decision]")
{
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial)
  {
    Snapshot X;
    for (std::size_t i = 0; i < 4; ++i)
    {
      const auto m = all_maneuvers[rng.below(3)];
      X.push_back(vehicle(static_cast<VehicleId>(i + 1), all_arms[i], m,
        rng.uniform(2.0, 20.0), rng.uniform(0.0, 12.0)));
    }
    std::vector<VehicleId> ids = ids_of(X);
    rng.shuffle(ids.begin(), ids.end());
    const PriorityOrder order(ids);
    const auto game = build_decision_game(X, order, params, patterns);

    StrategyProfile profile(4);
    for (auto& p : profile)
      p = rng.below(4);
    std::vector<std::size_t> choice(4);
    for (std::size_t p = 0; p < 4; ++p)
      choice[game.snapshot_index(p)] = profile[p];
    for (std::size_t p = 0; p < 4; ++p)
    {
      const double want = accumulated_cost(
        game.snapshot_index(p), X, order, choice, patterns, params);
      CHECK(game.cost(p, profile) == want);
    }
  }
}

TEST_CASE("players decide in priority order", "[decision]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 5.0),
    approaching(2, Arm::East, Maneuver::Straight, 5.0)};
  const auto game = build_decision_game(X, PriorityOrder({2, 1}), params, patterns);
  CHECK(game.snapshot_index(0) == 1);
  CHECK(game.snapshot_index(1) == 0);
  CHECK_THROWS_AS(build_decision_game(X, PriorityOrder({1}), params, patterns),
    std::invalid_argument);
}

TEST_CASE("non-conflicting vehicles decide as if alone", "[decision]")
{
  for (const auto& [ds, dn] : {std::pair{5.0, 5.0}, {1.0, 8.0}, {12.0, 0.5}})
  {
    const auto south = approaching(1, Arm::South, Maneuver::Straight, ds, 4.0);
    const auto north = approaching(2, Arm::North, Maneuver::TurnLeft, dn, 7.0);
    REQUIRE_FALSE(paths_conflict(south.path, north.path));

    const auto both = solve(build_decision_game(
      Snapshot{south, north}, PriorityOrder({2, 1}), params, patterns));
    const auto alone_s = solve(build_decision_game(
      Snapshot{south}, PriorityOrder({1}), params, patterns));
    const auto alone_n = solve(build_decision_game(
      Snapshot{north}, PriorityOrder({2}), params, patterns));
    CHECK(both.pattern_of[0] == alone_s.pattern_of[0]);
    CHECK(both.pattern_of[1] == alone_n.pattern_of[0]);
  }
}

TEST_CASE("the minimal vehicle is at least as bold", "[decision]")
{
  for (const double d : {2.0, 4.0, 6.0, 9.0})
  {
    const auto south = approaching(1, Arm::South, Maneuver::Straight, d);
    const auto east = approaching(2, Arm::East, Maneuver::Straight, d);
    for (const auto& order : {PriorityOrder({1, 2}), PriorityOrder({2, 1})})
    {
      const auto eq = solve(build_decision_game(
        Snapshot{south, east}, order, params, patterns));
      const std::size_t first = order.minimal() == 1 ? 0 : 1;
      CHECK(eq.head[first] >= eq.head[1 - first]);
    }
  }
}

TEST_CASE("leaving vehicles play their speed-keeping pattern", "[decision]")
{
  const auto gone = vehicle(1, Arm::South, Maneuver::Straight, 36.0, 16.7);
  REQUIRE(gone.config.status == Status::Leaving);
  const auto other = approaching(2, Arm::East, Maneuver::Straight, 3.0);

  const auto table = std::make_shared<const DecisionTable>(
    Snapshot{gone, other}, params, patterns);
  CHECK(patterns[table->solo_pattern(0)].front() == 0.0);

  const DecisionGame game(table, PriorityOrder({2}));
  CHECK(game.player_count() == 1);
  const auto eq = solve(game);
  CHECK(eq.head[0] == 0.0);
}

TEST_CASE("four-player solve stays within the time budget", "[decision]")
{
  Snapshot X;
  for (std::size_t i = 0; i < 4; ++i)
    X.push_back(approaching(static_cast<VehicleId>(i + 1), all_arms[i],
      Maneuver::TurnRight, 4.0, 3.0));
  const auto start = std::chrono::steady_clock::now();
  const int solves = 200;
  std::size_t sink = 0;
  for (int i = 0; i < solves; ++i)
  {
    const auto eq = solve(build_decision_game(
      X, PriorityOrder({1, 2, 3, 4}), params, patterns));
    sink += eq.pattern_of[0];
  }
  const std::chrono::duration<double, std::milli> elapsed =
    std::chrono::steady_clock::now() - start;
  CHECK(sink < 4 * solves);
  CHECK(elapsed.count() / solves < 5.0);
}
