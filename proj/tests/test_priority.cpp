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

#include <map>
#include <set>

using namespace isect;
using namespace isect::test;

namespace {

const CostParams params;
const PatternSet patterns;
const BehaviorParams behavior;

std::shared_ptr<const DecisionTable> table_of(const Snapshot& X)
{
  return std::make_shared<const DecisionTable>(X, params, patterns);
}

/// Accelerations an observer infers when everybody follows the equilibrium
/// of `order`.
std::vector<double> observed_under(
  const std::shared_ptr<const DecisionTable>& table, const PriorityOrder& order)
{
  const auto eq = solve(DecisionGame(table, order));
  std::vector<double> out;
  for (std::size_t k = 0; k < eq.head.size(); ++k)
    out.push_back(effective_acceleration(*table, k, eq.head[k], -50.0));
  return out;
}

double head_of(
  const std::shared_ptr<const DecisionTable>& table, const PriorityOrder& order,
  std::size_t k)
{
  return solve(DecisionGame(table, order)).head[k];
}

} // namespace

TEST_CASE("vehicles inside go first", "[priority]")
{
  const Snapshot X{at_center(1, Arm::South),
    approaching(2, Arm::West, Maneuver::Straight, 4.0)};
  REQUIRE(X[0].config.status == Status::Inside);
  REQUIRE(X[1].config.status == Status::Entering);
  for (std::uint64_t seed = 0; seed < 200; ++seed)
  {
    Rng rng(seed);
    CHECK(init_angelic(X, rng) == PriorityOrder({1, 2}));
  }
}

TEST_CASE("with fewer than four vehicles the one from the left goes first", "[priority]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 5.0),
    approaching(2, Arm::East, Maneuver::Straight, 5.0),
    approaching(3, Arm::West, Maneuver::Straight, 5.0)};
  // West is left of South, South is left of East.
  for (std::uint64_t seed = 0; seed < 100; ++seed)
  {
    Rng rng(seed);
    CHECK(init_angelic(X, rng) == PriorityOrder({3, 1, 2}));
  }
}

TEST_CASE("a significantly closer vehicle goes first", "[priority]")
{
  // Four vehicles disable the left rule. Distances to the center grow with
  // the id; gaps of more than 2 m order the pair.
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 1.0),
    approaching(2, Arm::East, Maneuver::Straight, 4.0),
    approaching(3, Arm::North, Maneuver::Straight, 5.0),
    approaching(4, Arm::West, Maneuver::Straight, 15.0)};
  std::vector<double> d;
  for (const auto& v : X)
    d.push_back(v.config.pose.position.norm());

  std::set<PriorityOrder> seen;
  for (std::uint64_t seed = 0; seed < 400; ++seed)
  {
    Rng rng(seed);
    const auto order = init_angelic(X, rng);
    seen.insert(order);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        if (d[k] - d[j] > 2.0)
          CHECK(order.precedes(X[j].id, X[k].id));
  }
  // Vehicles 2 and 3 are within 2 m of each other: both orders occur.
  CHECK(seen == std::set<PriorityOrder>{
    PriorityOrder({1, 2, 3, 4}), PriorityOrder({1, 3, 2, 4})});
}

TEST_CASE("four equidistant vehicles admit every order", "[priority]")
{
  Snapshot X;
  for (std::size_t i = 0; i < 4; ++i)
    X.push_back(approaching(static_cast<VehicleId>(i + 1), all_arms[i],
      Maneuver::Straight, 5.0));
  std::map<PriorityOrder, int> count;
  const int draws = 24000;
  for (int i = 0; i < draws; ++i)
  {
    Rng rng = Rng::keyed({5, static_cast<std::uint64_t>(i)});
    ++count[init_angelic(X, rng)];
  }
  CHECK(count.size() == 24);
  const double p = 1.0 / 24.0;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [order, c] : count)
    CHECK(std::abs(c - draws * p) <= 3.0 * sigma + 1.0);
}

TEST_CASE("retained constraints are acyclic and respected", "[priority]")
{
  Rng gen(31);
  for (int trial = 0; trial < 300; ++trial)
  {
    Snapshot X;
    const std::size_t n = 2 + gen.below(3);
    for (std::size_t i = 0; i < n; ++i)
    {
      const auto m = all_maneuvers[gen.below(3)];
      X.push_back(vehicle(static_cast<VehicleId>(i + 1), all_arms[i], m,
        gen.uniform(2.0, 30.0)));
    }
    const auto constraints = right_of_way_constraints(X);
    for (const auto& c : constraints.dropped)
      CHECK(c.rule != RightOfWayRule::AlreadyInside);
    Rng rng(static_cast<std::uint64_t>(trial));
    const auto order = init_angelic(X, rng);
    CHECK(order.covers(player_ids(X)));
    CHECK(satisfies(order, constraints.retained));
  }
}

TEST_CASE("leaving vehicles take no part in priority", "[priority]")
{
  const Snapshot X{vehicle(1, Arm::South, Maneuver::Straight, 36.0, 10.0),
    approaching(2, Arm::East, Maneuver::Straight, 5.0),
    approaching(3, Arm::West, Maneuver::Straight, 5.0)};
  REQUIRE(X[0].config.status == Status::Leaving);
  Rng rng(1);
  CHECK(init_angelic(X, rng).covers({2, 3}));
  CHECK(count_not_leaving(X) == 2);
}

TEST_CASE("selfish vehicles rank themselves first", "[priority]")
{
  Rng one(1);
  CHECK(init_selfish(7, {7}, one) == PriorityOrder({7}));
  CHECK_THROWS_AS(init_selfish(9, {1, 2}, one), std::invalid_argument);

  std::map<PriorityOrder, int> count;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
  {
    Rng rng = Rng::keyed({8, static_cast<std::uint64_t>(i)});
    const auto order = init_selfish(3, {1, 2, 3, 4}, rng);
    REQUIRE(order.minimal() == 3);
    ++count[order];
  }
  CHECK(count.size() == 6);
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [order, c] : count)
    CHECK(std::abs(c - draws * p) <= 3.0 * sigma);
}

TEST_CASE("right-of-way changes are status changes", "[priority]")
{
  const Snapshot before{approaching(1, Arm::South, Maneuver::Straight, 3.0),
    vehicle(2, Arm::East, Maneuver::Straight, 33.0)};
  REQUIRE(before[1].config.status == Status::Inside);
  CHECK_FALSE(right_of_way_changed(before, before));

  auto entered = before;
  entered[0] = at_center(1, Arm::South);
  CHECK(right_of_way_changed(before, entered));

  auto left = before;
  left[1] = vehicle(2, Arm::East, Maneuver::Straight, 36.0);
  REQUIRE(left[1].config.status == Status::Leaving);
  CHECK(right_of_way_changed(before, left));
}

TEST_CASE("fitting keeps an order that explains the observations", "[priority]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 3.0, 2.0),
    approaching(2, Arm::East, Maneuver::Straight, 3.0, 2.0),
    approaching(3, Arm::North, Maneuver::TurnRight, 6.0, 1.0)};
  const auto table = table_of(X);
  for (const auto& current : all_orders({1, 2, 3}))
  {
    const auto observed = observed_under(table, current);
    Rng rng(4);
    const auto fit = fit_order(table, observed, current, 1, behavior, rng);
    CHECK(fit.best_score == 0.0);
    CHECK(fit.order == current);
  }
}

TEST_CASE("fitting a single vehicle", "[priority]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 3.0)};
  Rng rng(0);
  const std::vector<double> observed{20.0};
  CHECK(fit_order(table_of(X), observed, PriorityOrder({1}), 1, behavior, rng).order
    == PriorityOrder({1}));
}

TEST_CASE("fitting ranks a vehicle that took the right of way first", "[priority]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 2.0),
    approaching(2, Arm::East, Maneuver::Straight, 2.0)};
  const auto table = table_of(X);
  const PriorityOrder mine({1, 2});
  const PriorityOrder theirs({2, 1});

  // The two orders predict different behaviour, and under the other
  // vehicle's claim self is no bolder.
  REQUIRE(observed_under(table, mine) != observed_under(table, theirs));
  REQUIRE(head_of(table, theirs, 0) <= head_of(table, mine, 0));

  const auto observed = observed_under(table, theirs);
  for (std::uint64_t seed = 0; seed < 50; ++seed)
  {
    Rng rng(seed);
    const auto fit = fit_order(table, observed, mine, 1, behavior, rng);
    CHECK(fit.order == theirs);
    CHECK_FALSE(fit.probabilistic);
  }
}

TEST_CASE("a bolder fitted order is adopted with probability one quarter", "[priority]")
{
  const Snapshot X{approaching(1, Arm::South, Maneuver::Straight, 2.0),
    approaching(2, Arm::East, Maneuver::Straight, 2.0)};
  const auto table = table_of(X);
  const PriorityOrder humble({2, 1});
  const PriorityOrder bold({1, 2});
  REQUIRE(head_of(table, bold, 0) > head_of(table, humble, 0));

  const auto observed = observed_under(table, bold);
  const int trials = 10000;
  int adopted = 0;
  for (int i = 0; i < trials; ++i)
  {
    Rng rng = Rng::keyed({12, static_cast<std::uint64_t>(i)});
    const auto fit = fit_order(table, observed, humble, 1, behavior, rng);
    REQUIRE(fit.probabilistic);
    REQUIRE(fit.best_fit == bold);
    adopted += fit.order == bold;
  }
  const double sigma = std::sqrt(trials * 0.25 * 0.75);
  CHECK(std::abs(adopted - 0.25 * trials) <= 3.0 * sigma);
}

TEST_CASE("maintenance by driver kind", "[priority]")
{
  const Snapshot before{approaching(1, Arm::South, Maneuver::Straight, 4.0, 3.0),
    approaching(2, Arm::East, Maneuver::Straight, 6.0, 3.0)};
  const auto table = table_of(before);
  const PriorityOrder order({2, 1});

  // Vehicle 1 enters the box during the step.
  Snapshot after = before;
  after[0] = vehicle(1, Arm::South, Maneuver::Straight, before[0].config.s + 3.0, 3.0);
  REQUIRE(after[0].config.status == Status::Inside);
  REQUIRE(right_of_way_changed(before, after));

  const std::vector<double> observed = observed_under(table, order);
  Rng rng(1);

  const auto demonic = maintain(DriverKind::Demonic, 1, order, table, after,
    observed, true, behavior, rng);
  CHECK(demonic.order == order);
  CHECK(demonic.update == PriorityUpdate::None);

  const auto intermediate = maintain(DriverKind::Intermediate, 1, order, table,
    after, observed, false, behavior, rng);
  CHECK(intermediate.order == order);
  CHECK(intermediate.update == PriorityUpdate::None);

  const auto angelic = maintain(DriverKind::Angelic, 1, order, table, after,
    observed, false, behavior, rng);
  CHECK(angelic.update == PriorityUpdate::RightOfWay);
  CHECK(angelic.order == PriorityOrder({1, 2}));

  const auto fitted = maintain(DriverKind::Intermediate, 1, order, table,
    before, observed, true, behavior, rng);
  CHECK(fitted.update == PriorityUpdate::Fitting);

  CHECK_THROWS_AS(maintain(DriverKind::Irrational, 1, order, table, after,
    observed, false, behavior, rng), std::logic_error);
}

TEST_CASE("orders drop vehicles that leave", "[priority]")
{
  const Snapshot before{approaching(1, Arm::South, Maneuver::Straight, 3.0),
    vehicle(2, Arm::East, Maneuver::Straight, 33.0, 10.0)};
  const auto table = table_of(before);
  Snapshot after = before;
  after[1] = vehicle(2, Arm::East, Maneuver::Straight, 36.0, 10.0);
  Rng rng(2);
  const auto r = maintain(DriverKind::Demonic, 1, PriorityOrder({1, 2}), table,
    after, std::vector<double>{0.0, 0.0}, false, behavior, rng);
  CHECK(r.order == PriorityOrder({1}));
}
