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

#ifndef ISECT__KINEMATICS_HPP
#define ISECT__KINEMATICS_HPP

#include "geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string_view>

namespace isect {

//==============================================================================
enum class Status { Entering = 0, Inside = 1, Leaving = 2 };

inline std::string_view to_string(Status s)
{
  switch (s)
  {
    case Status::Entering: return "entering";
    case Status::Inside: return "inside";
    case Status::Leaving: return "leaving";
  }
  return "?";
}

inline Status parse_status(std::string_view s)
{
  for (const auto st : {Status::Entering, Status::Inside, Status::Leaving})
    if (to_string(st) == s)
      return st;
  throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

struct VehicleDims
{
  double length = 4.5;
  double width = 1.8;

  friend bool operator==(const VehicleDims&, const VehicleDims&) = default;
};

//==============================================================================
/// Kinematic state of one vehicle along its path. `a` is the acceleration
/// applied during the step that produced this configuration.
struct Configuration
{
  double s = 0.0;
  Pose pose;
  double v = 0.0;
  double a = 0.0;
  Status status = Status::Entering;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

inline Rectangle footprint(const Configuration& c, const VehicleDims& dims)
{
  return {c.pose, dims.length, dims.width};
}

/// Status of a vehicle at arc position `s`, never moving backwards from
/// `previous`.
inline Status update_status(
  double s,
  const NavigationPath& path,
  const VehicleDims& dims,
  Status previous = Status::Entering)
{
  Status now = Status::Inside;
  if (s > path.box_exit())
    now = Status::Leaving;
  else if (!intersects_box(
      {path.pose(s), dims.length, dims.width},
      path.layout().box_half_width))
    now = Status::Entering;
  return std::max(now, previous);
}

inline Status update_status(
  const Configuration& c,
  const NavigationPath& path,
  const VehicleDims& dims)
{
  return update_status(c.s, path, dims, c.status);
}

inline Configuration make_configuration(
  double s,
  double v,
  const NavigationPath& path,
  const VehicleDims& dims)
{
  Configuration c;
  c.s = s;
  c.pose = path.pose(s);
  c.v = v;
  c.status = update_status(s, path, dims);
  return c;
}

/// One step of constant acceleration along the path. Speed never drops below
/// zero: a vehicle braking to a halt mid-step stays stopped for the rest of
/// it. Positions past the end of the path are clamped to the end.
inline Configuration next_config(
  const Configuration& c,
  double a,
  double dt,
  const NavigationPath& path,
  const VehicleDims& dims)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("next_config: dt must be > 0");

  double ds = 0.0;
  double v = c.v + a * dt;
  if (v >= 0.0)
  {
    ds = c.v * dt + 0.5 * a * dt * dt;
  }
  else
  {
    const double t_stop = c.v / -a;
    ds = c.v * t_stop + 0.5 * a * t_stop * t_stop;
    v = 0.0;
  }

  Configuration out;
  out.s = std::min(c.s + ds, path.total_length());
  out.pose = path.pose(out.s);
  out.v = v;
  out.a = a;
  out.status = update_status(out.s, path, dims, c.status);
  return out;
}

/// Acceleration that explains the transition prev -> cur. A vehicle that
/// came to a halt within the step is reported at `stop_deceleration` when its
/// travelled distance matches braking at that rate.
inline double infer_acceleration(
  const Configuration& prev,
  const Configuration& cur,
  double dt,
  double stop_deceleration = -50.0)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("infer_acceleration: dt must be > 0");

  const double quotient = (cur.v - prev.v) / dt;
  if (cur.v == 0.0 && prev.v > 0.0 && stop_deceleration < 0.0)
  {
    const double t_stop = std::min(dt, prev.v / -stop_deceleration);
    const double expected =
      prev.v * t_stop + 0.5 * stop_deceleration * t_stop * t_stop;
    const double ds = cur.s - prev.s;
    if (std::abs(ds - expected) <= 1e-9 * std::max(1.0, expected))
      return stop_deceleration;
  }
  return quotient;
}

} // namespace isect

#endif // ISECT__KINEMATICS_HPP
