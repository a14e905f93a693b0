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

using namespace isect;
using namespace isect::test;
using Catch::Matchers::WithinRel;

namespace {

Scenario lone(Arm arm, Maneuver m, DriverKind kind = DriverKind::Angelic)
{
  Scenario sc;
  sc.label = "lone";
  sc.vehicles.push_back({1, arm, m, {4.5, 1.8}, kind, 0.0});
  return sc;
}

VehicleState posed(VehicleId id, Arm arm, double x, VehicleDims dims)
{
  VehicleState v;
  v.id = id;
  v.path = NavigationPath(arm, Maneuver::Straight, {});
  v.dims = dims;
  v.config.pose = {{x, 0.0}, 0.0};
  return v;
}

std::vector<const TraceRow*> rows_of(const SimResult& r, VehicleId id)
{
  std::vector<const TraceRow*> out;
  for (const auto& row : r.trace)
    if (row.id == id)
      out.push_back(&row);
  return out;
}

} // namespace

TEST_CASE("a lone vehicle starts with full acceleration", "[sim]")
{
  World world(lone(Arm::South, Maneuver::Straight), SimConfig{});
  world.step();
  const auto& v = world.vehicles().front();
  CHECK_THAT(v.config.v, WithinRel(2.0, 1e-12));
  CHECK(v.config.a == 20.0);
  CHECK(world.time() == 1);
}

TEST_CASE("a lone vehicle crosses without incident", "[sim]")
{
  for (const auto m : all_maneuvers)
  {
    const auto r = run(lone(Arm::East, m), SimConfig{});
    CHECK_FALSE(r.collided);
    CHECK_FALSE(r.congested);
    CHECK_FALSE(r.timed_out);
    // About 30 m from rest at up to 20 m/s^2 and 16.7 m/s.
    CHECK(r.total_steps >= 15);
    CHECK(r.total_steps <= 40);
    CHECK(r.total_steps == static_cast<std::size_t>(r.mean_vehicle_steps));
  }
}

TEST_CASE("vehicles on non-conflicting paths ignore each other", "[sim]")
{
  Scenario both;
  both.label = "pair";
  both.vehicles = {
    {1, Arm::South, Maneuver::Straight, {4.5, 1.8}, DriverKind::Angelic, 0.0},
    {2, Arm::North, Maneuver::TurnLeft, {5.0, 2.0}, DriverKind::Angelic, 0.0}};
  const auto r = run(both, SimConfig{});
  CHECK_FALSE(r.collided);
  CHECK_FALSE(r.congested);

  for (const auto& setup : both.vehicles)
  {
    Scenario alone;
    alone.vehicles = {setup};
    const auto solo = run(alone, SimConfig{});
    const auto a = rows_of(r, setup.id);
    const auto b = rows_of(solo, setup.id);
    const std::size_t n = std::min(a.size(), b.size());
    REQUIRE(n > 10);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(a[i]->config == b[i]->config);
  }
}

TEST_CASE("collision detection", "[sim]")
{
  // Length 6 and width 1.5 give disks of radius 1.25 spaced 2 m apart.
  const VehicleDims dims{6.0, 1.5};
  const auto a = posed(1, Arm::South, 0.0, dims);
  CHECK(detect_collision(Snapshot{a, posed(2, Arm::East, 7.0, dims)}).empty());
  CHECK(detect_collision(Snapshot{a, posed(2, Arm::East, 5.0, dims)})
    == std::vector<VehiclePair>{{1, 2}});
  // Disks exactly touching.
  const auto touching = posed(2, Arm::East, 6.5, dims);
  REQUIRE(disk_set_distance(occupancy(a), occupancy(touching)) == 0.0);
  CHECK(detect_collision(Snapshot{a, touching}) == std::vector<VehiclePair>{{1, 2}});
}

TEST_CASE("congestion detection", "[sim]")
{
  const auto s = at_center(1, Arm::South, Maneuver::Straight);
  CHECK_FALSE(detect_congestion(Snapshot{s,
    approaching(2, Arm::East, Maneuver::Straight, 5.0)}));

  // Opposite arms, both straight: no conflict.
  const auto n = vehicle(2, Arm::North, Maneuver::Straight, 25.0);
  REQUIRE(n.config.status == Status::Inside);
  CHECK_FALSE(detect_congestion(Snapshot{s, n}));

  const auto e = vehicle(3, Arm::East, Maneuver::Straight, 25.0);
  REQUIRE(e.config.status == Status::Inside);
  CHECK(detect_congestion(Snapshot{s, e}));
  CHECK(congested_pairs(Snapshot{s, n, e})
    == std::vector<VehiclePair>{{1, 3}, {2, 3}});
}

TEST_CASE("scenario validation", "[sim]")
{
  Scenario sc = lone(Arm::South, Maneuver::Straight);
  sc.vehicles.push_back(sc.vehicles.front());
  sc.vehicles.back().id = 2;
  CHECK_THROWS_AS(run(sc, SimConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(run(Scenario{}, SimConfig{}), std::invalid_argument);
}

TEST_CASE("runs are deterministic and self-consistent", "[sim]")
{
  for (const auto c : all_cases())
  {
    for (std::uint64_t i = 0; i < 5; ++i)
    {
      const auto sc = generate_scenario(c, i, 99);
      const auto a = run(sc, SimConfig{});
      const auto b = run(sc, SimConfig{});
      CHECK(a.trace == b.trace);
      CHECK(a.events == b.events);

      bool collision_event = false;
      for (const auto& e : a.events)
        collision_event |= e.kind == EventKind::Collision;
      CHECK(a.collided == collision_event);
      CHECK(a.total_steps <= 600);
      if (!a.collided && !a.timed_out)
        CHECK(a.total_steps > 0);

      for (const auto& row : a.trace)
      {
        CHECK(row.config.v >= 0.0);
        if (row.kind == DriverKind::Irrational)
          CHECK(row.order == "-");
      }
    }
  }
}

TEST_CASE("statuses never move backwards", "[sim]")
{
  for (std::uint64_t i = 0; i < 10; ++i)
  {
    const auto r = run(generate_scenario({4, true}, i, 3), SimConfig{});
    std::map<VehicleId, Status> last;
    for (const auto& row : r.trace)
    {
      const auto it = last.find(row.id);
      if (it != last.end())
        CHECK(row.config.status >= it->second);
      last[row.id] = row.config.status;
    }
  }
}

TEST_CASE("demonic vehicles never change their mind", "[sim]")
{
  for (std::uint64_t i = 0; i < 20; ++i)
  {
    const auto sc = generate_scenario({2, false}, i, 5);
    const auto r = run(sc, SimConfig{});
    VehicleId demon = 0;
    for (const auto& v : sc.vehicles)
      if (v.kind == DriverKind::Demonic)
        demon = v.id;
    REQUIRE(demon != 0);

    // The order only shrinks as vehicles leave, keeping its relative order.
    std::string first;
    for (const auto* row : rows_of(r, demon))
    {
      if (row->config.status == Status::Leaving)
        break;
      if (first.empty())
        first = row->order;
      CHECK(row->order.front() == first.front());
      std::size_t pos = 0;
      for (const char ch : row->order)
      {
        pos = first.find(ch, pos);
        CHECK(pos != std::string::npos);
      }
    }
  }
}

TEST_CASE("a frozen world only advances time", "[sim]")
{
  SimConfig config;
  config.patterns = PatternSet({{0, 0, 0}});
  config.behavior.unlock_probability = 0.0;
  Scenario sc;
  sc.vehicles = {
    {1, Arm::South, Maneuver::Straight, {4.5, 1.8}, DriverKind::Angelic, 0.0},
    {2, Arm::East, Maneuver::TurnLeft, {4.5, 1.8}, DriverKind::Intermediate, 0.0}};
  World world(sc, config);
  const auto before = world.snapshot();
  for (int i = 0; i < 5; ++i)
    world.step();
  const auto after = world.snapshot();
  CHECK(world.time() == 5);
  REQUIRE(after.size() == before.size());
  for (std::size_t k = 0; k < before.size(); ++k)
  {
    CHECK(after[k].config.s == before[k].config.s);
    CHECK(after[k].config.v == 0.0);
  }
}

TEST_CASE("the step cap ends a stuck run", "[sim]")
{
  SimConfig config;
  config.patterns = PatternSet({{0, 0, 0}});
  config.step_cap = 30;
  const auto r = run(lone(Arm::South, Maneuver::Straight), config);
  CHECK(r.timed_out);
  CHECK(r.steps_run == 30);
  CHECK(r.total_steps == 0);
  CHECK(r.events.back().kind == EventKind::Timeout);
}
