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

#ifndef ISECT__GEOMETRY_HPP
#define ISECT__GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace isect {

//==============================================================================
struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

struct Pose
{
  Vec2 position;
  double heading = 0.0;

  friend bool operator==(const Pose&, const Pose&) = default;
};

//==============================================================================
/// Square four-way intersection with one lane per direction and left-hand
/// traffic. The intersection center is the origin; the conflict box is
/// [-box_half_width, box_half_width]^2.
struct IntersectionLayout
{
  double lane_width = 3.5;
  double box_half_width = 7.0;
  double arm_length = 20.0;

  void validate() const
  {
    if (!(lane_width > 0.0))
      throw std::invalid_argument("IntersectionLayout: lane_width must be > 0");
    if (!(box_half_width >= lane_width))
      throw std::invalid_argument(
        "IntersectionLayout: box_half_width must be >= lane_width");
    if (!(arm_length > 0.0))
      throw std::invalid_argument("IntersectionLayout: arm_length must be > 0");
  }

  friend bool operator==(
    const IntersectionLayout&, const IntersectionLayout&) = default;
};

//==============================================================================
/// The road a vehicle enters from. Values follow counterclockwise order
/// seen from above, starting at South.
enum class Arm { South = 0, East = 1, North = 2, West = 3 };

enum class Maneuver { Straight = 0, TurnLeft = 1, TurnRight = 2 };

inline constexpr std::array<Arm, 4> all_arms{
  Arm::South, Arm::East, Arm::North, Arm::West};

inline constexpr std::array<Maneuver, 3> all_maneuvers{
  Maneuver::Straight, Maneuver::TurnLeft, Maneuver::TurnRight};

inline std::string_view to_string(Arm arm)
{
  switch (arm)
  {
    case Arm::South: return "S";
    case Arm::East: return "E";
    case Arm::North: return "N";
    case Arm::West: return "W";
  }
  return "?";
}

inline std::string_view to_string(Maneuver m)
{
  switch (m)
  {
    case Maneuver::Straight: return "straight";
    case Maneuver::TurnLeft: return "left";
    case Maneuver::TurnRight: return "right";
  }
  return "?";
}

inline Arm parse_arm(std::string_view s)
{
  for (const auto a : all_arms)
    if (to_string(a) == s)
      return a;
  throw std::invalid_argument("unknown arm '" + std::string(s) + "'");
}

inline Maneuver parse_maneuver(std::string_view s)
{
  for (const auto m : all_maneuvers)
    if (to_string(m) == s)
      return m;
  throw std::invalid_argument("unknown maneuver '" + std::string(s) + "'");
}

inline bool opposite(Arm a, Arm b)
{
  return (static_cast<int>(a) + 2) % 4 == static_cast<int>(b);
}

//==============================================================================
/// Fixed path of a vehicle: a straight entry leg of length arm_length ending
/// at the box edge, a maneuver inside the box (straight segment or quarter
/// circle), and a straight exit leg of length arm_length. Arc position s is
/// measured along the path of the vehicle's center.
class NavigationPath
{
public:
  NavigationPath() = default;

  NavigationPath(Arm entry, Maneuver maneuver, const IntersectionLayout& layout)
  : _entry(entry),
    _maneuver(maneuver),
    _layout(layout)
  {
    layout.validate();
    const double b = layout.box_half_width;
    const double half_lane = 0.5 * layout.lane_width;
    switch (maneuver)
    {
      case Maneuver::Straight:
        _radius = 0.0;
        _inner_length = 2.0 * b;
        break;
      case Maneuver::TurnLeft:
        _radius = b - half_lane;
        _inner_length = 0.5 * std::numbers::pi * _radius;
        break;
      case Maneuver::TurnRight:
        _radius = b + half_lane;
        _inner_length = 0.5 * std::numbers::pi * _radius;
        break;
    }
    const double angle = 0.5 * std::numbers::pi * static_cast<int>(entry);
    _cos = std::cos(angle);
    _sin = std::sin(angle);
  }

  Arm entry_arm() const { return _entry; }
  Maneuver maneuver() const { return _maneuver; }
  const IntersectionLayout& layout() const { return _layout; }

  double total_length() const
  {
    return 2.0 * _layout.arm_length + _inner_length;
  }

  /// Arc position where the path crosses into the box.
  double box_entry() const { return _layout.arm_length; }

  /// Arc position where the path crosses out of the box.
  double box_exit() const { return _layout.arm_length + _inner_length; }

  /// Pose at arc position s, clamped to [0, total_length].
  Pose pose(double s) const
  {
    const Pose local = local_pose(std::clamp(s, 0.0, total_length()));
    return {
      {_cos * local.position.x - _sin * local.position.y,
       _sin * local.position.x + _cos * local.position.y},
      wrap_angle(local.heading + 0.5 * std::numbers::pi * static_cast<int>(_entry))
    };
  }

  friend bool operator==(const NavigationPath& a, const NavigationPath& b)
  {
    return a._entry == b._entry && a._maneuver == b._maneuver
      && a._layout == b._layout;
  }

private:
  static double wrap_angle(double a)
  {
    return std::remainder(a, 2.0 * std::numbers::pi);
  }

  // Path of a vehicle entering from the South, heading north on the lane at
  // x = -lane_width/2. Other arms are rotations of it.
  Pose local_pose(double s) const
  {
    const double b = _layout.box_half_width;
    const double x0 = -0.5 * _layout.lane_width;
    const double half_pi = 0.5 * std::numbers::pi;

    if (s <= box_entry())
      return {{x0, -b - _layout.arm_length + s}, half_pi};

    const double u = s - box_entry();
    if (s <= box_exit())
    {
      switch (_maneuver)
      {
        case Maneuver::Straight:
          return {{x0, -b + u}, half_pi};
        case Maneuver::TurnLeft:
        {
          const double theta = u / _radius;
          return {
            {-b + _radius * std::cos(theta), -b + _radius * std::sin(theta)},
            theta + half_pi};
        }
        case Maneuver::TurnRight:
        {
          const double theta = std::numbers::pi - u / _radius;
          return {
            {b + _radius * std::cos(theta), -b + _radius * std::sin(theta)},
            theta - half_pi};
        }
      }
    }

    const double w = s - box_exit();
    switch (_maneuver)
    {
      case Maneuver::Straight:
        return {{x0, b + w}, half_pi};
      case Maneuver::TurnLeft:
        return {{-b - w, x0}, std::numbers::pi};
      case Maneuver::TurnRight:
        return {{b + w, -x0}, 0.0};
    }
    return {};
  }

  Arm _entry = Arm::South;
  Maneuver _maneuver = Maneuver::Straight;
  IntersectionLayout _layout;
  double _radius = 0.0;
  double _inner_length = 14.0;
  double _cos = 1.0;
  double _sin = 0.0;
};

//==============================================================================
/// Three equal disks covering a length x width rectangle.
struct DiskSet
{
  std::array<Vec2, 3> centers;
  double radius = 0.0;
};

inline DiskSet occupancy_disks(const Pose& pose, double length, double width)
{
  if (!(length > 0.0) || !(width > 0.0))
    throw std::invalid_argument("occupancy_disks: dimensions must be > 0");

  const Vec2 dir{std::cos(pose.heading), std::sin(pose.heading)};
  const double offset = length / 3.0;
  DiskSet out;
  out.centers = {
    pose.position - offset * dir,
    pose.position,
    pose.position + offset * dir};
  out.radius = std::hypot(length / 6.0, width / 2.0);
  return out;
}

/// Clearance between the unions of two disk sets; zero when they touch or
/// overlap.
inline double disk_set_distance(const DiskSet& a, const DiskSet& b)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ca : a.centers)
  {
    for (const auto& cb : b.centers)
    {
      const double gap = (ca - cb).norm() - (a.radius + b.radius);
      best = std::min(best, std::max(0.0, gap));
    }
  }
  return best;
}

/// Two paths are conflict-free only when they come from opposite arms and
/// neither turns right.
inline bool paths_conflict(const NavigationPath& p, const NavigationPath& q)
{
  if (p.entry_arm() == q.entry_arm())
    throw std::invalid_argument("paths_conflict: paths share an entry arm");

  const auto no_right = [](const NavigationPath& path)
  {
    return path.maneuver() != Maneuver::TurnRight;
  };
  if (opposite(p.entry_arm(), q.entry_arm()) && no_right(p) && no_right(q))
    return false;
  return true;
}

/// True iff a vehicle entering from `j` approaches from the left-hand side of
/// a vehicle entering from `k`. For a vehicle coming from the South (heading
/// north) that is the West arm.
inline bool left_of(Arm j, Arm k)
{
  if (j == k)
    throw std::invalid_argument("left_of: arms must differ");
  return static_cast<int>(j) == (static_cast<int>(k) + 3) % 4;
}

//==============================================================================
/// Oriented rectangle centered at `pose`.
struct Rectangle
{
  Pose pose;
  double length = 0.0;
  double width = 0.0;

  std::array<Vec2, 4> corners() const
  {
    const Vec2 f{std::cos(pose.heading), std::sin(pose.heading)};
    const Vec2 l{-f.y, f.x};
    const double hl = 0.5 * length;
    const double hw = 0.5 * width;
    return {
      pose.position + hl * f + hw * l,
      pose.position + hl * f - hw * l,
      pose.position - hl * f - hw * l,
      pose.position - hl * f + hw * l};
  }
};

/// Separating-axis test of an oriented rectangle against the square
/// [-half, half]^2. Touching counts as intersecting.
inline bool intersects_box(const Rectangle& rect, double half)
{
  const auto corners = rect.corners();

  // Box axes.
  double min_x = corners[0].x, max_x = corners[0].x;
  double min_y = corners[0].y, max_y = corners[0].y;
  for (const auto& c : corners)
  {
    min_x = std::min(min_x, c.x);
    max_x = std::max(max_x, c.x);
    min_y = std::min(min_y, c.y);
    max_y = std::max(max_y, c.y);
  }
  if (max_x < -half || min_x > half || max_y < -half || min_y > half)
    return false;

  // Rectangle axes.
  const Vec2 f{std::cos(rect.pose.heading), std::sin(rect.pose.heading)};
  const Vec2 l{-f.y, f.x};
  for (const auto& axis : {f, l})
  {
    const double half_extent = half * (std::abs(axis.x) + std::abs(axis.y));
    const double center = dot(rect.pose.position, axis);
    const double rect_extent =
      (axis == f ? 0.5 * rect.length : 0.5 * rect.width);
    if (center - rect_extent > half_extent
      || center + rect_extent < -half_extent)
      return false;
  }
  return true;
}

} // namespace isect

#endif // ISECT__GEOMETRY_HPP
