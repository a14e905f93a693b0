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

// Qualitative demo: among case-4' runs (three intermediate vehicles and one
// irrational vehicle, random initial speeds), find the closest call that
// still ended without contact, print the steps around it and write its
// trace and an SVG plot.
//
// usage: dangerous_episode [seed] [runs] [output prefix]

#include <isect/io.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

struct CloseCall
{
  std::uint64_t run = 0;
  double distance = std::numeric_limits<double>::infinity();
  std::size_t step = 0;
  isect::VehiclePair pair;
};

/// Smallest gap between the irrational vehicle and a rational one.
CloseCall closest_gap(
  std::uint64_t run, const isect::Scenario& sc, const isect::SimResult& r,
  const isect::SimConfig& config)
{
  CloseCall best;
  best.run = run;
  isect::VehicleId irrational = 0;
  for (const auto& v : sc.vehicles)
    if (v.kind == isect::DriverKind::Irrational)
      irrational = v.id;

  for (std::size_t i = 0; i < r.trace.size();)
  {
    std::size_t j = i;
    isect::Snapshot X;
    while (j < r.trace.size() && r.trace[j].step == r.trace[i].step)
    {
      const auto& row = r.trace[j++];
      X.push_back({row.id,
        isect::NavigationPath(row.arm, row.maneuver, config.layout), row.dims,
        row.config});
    }
    for (const auto& a : X)
    {
      if (a.id != irrational)
        continue;
      for (const auto& b : X)
      {
        if (b.id == irrational)
          continue;
        const double d =
          isect::disk_set_distance(isect::occupancy(a), isect::occupancy(b));
        if (d < best.distance)
          best = {run, d, r.trace[i].step, {a.id, b.id}};
      }
    }
    i = j;
  }
  return best;
}

} // namespace

int main(int argc, char** argv)
{
  const std::uint64_t seed =
    argc > 1 ? std::stoull(argv[1]) : isect::default_seed();
  const std::uint64_t runs = argc > 2 ? std::stoull(argv[2]) : 200;
  const std::string prefix = argc > 3 ? argv[3] : "dangerous_episode";

  const isect::CaseId c{4, true};
  const isect::SimConfig config;

  CloseCall best;
  for (std::uint64_t run = 0; run < runs; ++run)
  {
    const auto sc = isect::generate_scenario(c, run, seed);
    const auto r = isect::run(sc, config);
    if (r.collided)
      continue;
    const auto call = closest_gap(run, sc, r, config);
    if (call.distance < best.distance)
      best = call;
  }
  if (!std::isfinite(best.distance))
  {
    std::cout << "no contact-free run found\n";
    return 1;
  }

  isect::TraceFile tf;
  tf.scenario = isect::generate_scenario(c, best.run, seed);
  tf.config = config;
  tf.result = isect::run(tf.scenario, config);

  std::cout << "case 4', seed " << seed << ", run " << best.run
            << ": closest gap " << isect::format_fixed(best.distance, 3)
            << " m between irrational vehicle " << best.pair.first
            << " and vehicle " << best.pair.second << " at step " << best.step
            << "\n\n";
  for (const auto& v : tf.scenario.vehicles)
  {
    std::cout << "  vehicle " << v.id << ": " << isect::to_string(v.kind)
              << " from " << isect::to_string(v.arm) << ", "
              << isect::to_string(v.maneuver) << ", v0 = "
              << isect::format_fixed(v.initial_speed, 2) << " m/s\n";
  }
  std::cout << "\n step   id: speed [m/s], acceleration [m/s^2], priority belief\n";

  const std::size_t from = best.step > 8 ? best.step - 8 : 0;
  for (std::size_t step = from; step <= best.step + 4; ++step)
  {
    bool any = false;
    for (const auto& row : tf.result.trace)
    {
      if (row.step != step)
        continue;
      if (!any)
        std::printf("%5zu", step);
      any = true;
      std::printf("   %d: %5.2f %4.0f %-4s", row.id, row.config.v, row.config.a,
        row.order.c_str());
    }
    if (any)
      std::printf("%s\n", step == best.step ? "   <- closest" : "");
  }

  std::ofstream trace(prefix + ".csv");
  isect::write_trace(trace, tf.scenario, tf.config, tf.result);
  std::ofstream svg(prefix + ".svg");
  isect::write_svg(svg, tf);
  std::cout << "\nwrote " << prefix << ".csv and " << prefix << ".svg\n";
  return 0;
}
