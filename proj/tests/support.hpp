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


#ifndef ISECT_TESTS__SUPPORT_HPP
#define ISECT_TESTS__SUPPORT_HPP

#include <isect/io.hpp>

namespace isect::test {

/// Vehicle at arc position s on its path with speed v.
inline VehicleState vehicle(
  VehicleId id, Arm arm, Maneuver m, double s, double v = 0.0,
  VehicleDims dims = {}, const IntersectionLayout& layout = {})
{
  VehicleState out;
  out.id = id;
  out.path = NavigationPath(arm, m, layout);
  out.dims = dims;
  out.config = make_configuration(s, v, out.path, dims);
  return out;
}

/// Vehicle whose center is `d` meters before the box edge on its entry leg.
inline VehicleState approaching(
  VehicleId id, Arm arm, Maneuver m, double d, double v = 0.0,
  VehicleDims dims = {})
{
  const IntersectionLayout layout;
  return vehicle(id, arm, m, layout.arm_length - d, v, dims, layout);
}

/// Vehicle parked with its center at the intersection center.
inline VehicleState at_center(VehicleId id, Arm arm, Maneuver m = Maneuver::Straight)
{
  const IntersectionLayout layout;
  return vehicle(
    id, arm, m, layout.arm_length + layout.box_half_width, 0.0, {}, layout);
}

inline double rel_error(double got, double want)
{
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

} // namespace isect::test

#endif // ISECT_TESTS__SUPPORT_HPP
