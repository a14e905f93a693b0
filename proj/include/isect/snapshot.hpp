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

#ifndef ISECT__SNAPSHOT_HPP
#define ISECT__SNAPSHOT_HPP

#include "kinematics.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace isect {

using VehicleId = int;

//==============================================================================
/// Everything an observer can see about one vehicle at one instant.
struct VehicleState
{
  VehicleId id = 0;
  NavigationPath path;
  VehicleDims dims;
  Configuration config;
};

/// Configurations of all vehicles currently in the scene.
using Snapshot = std::vector<VehicleState>;

inline std::optional<std::size_t> index_of(const Snapshot& X, VehicleId id)
{
  for (std::size_t i = 0; i < X.size(); ++i)
    if (X[i].id == id)
      return i;
  return std::nullopt;
}

inline std::vector<VehicleId> ids_of(const Snapshot& X)
{
  std::vector<VehicleId> ids;
  ids.reserve(X.size());
  for (const auto& v : X)
    ids.push_back(v.id);
  return ids;
}

/// Vehicles that still compete for the intersection: those not yet leaving.
/// Leaving vehicles remain physical obstacles but take no part in priority.
inline std::vector<VehicleId> player_ids(const Snapshot& X)
{
  std::vector<VehicleId> ids;
  for (const auto& v : X)
    if (v.config.status != Status::Leaving)
      ids.push_back(v.id);
  return ids;
}

inline DiskSet occupancy(const VehicleState& v)
{
  return occupancy_disks(v.config.pose, v.dims.length, v.dims.width);
}

//==============================================================================
/// Strict total order over vehicle ids. The first element is the minimal one,
/// i.e. the vehicle believed to have the highest priority.
class PriorityOrder
{
public:
  PriorityOrder() = default;

  explicit PriorityOrder(std::vector<VehicleId> ids)
  : _ids(std::move(ids))
  {
    auto sorted = _ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("PriorityOrder: duplicate vehicle id");
  }

  const std::vector<VehicleId>& ids() const { return _ids; }
  std::size_t size() const { return _ids.size(); }
  bool empty() const { return _ids.empty(); }

  VehicleId minimal() const
  {
    if (_ids.empty())
      throw std::logic_error("PriorityOrder::minimal: empty order");
    return _ids.front();
  }

  bool contains(VehicleId id) const
  {
    return std::find(_ids.begin(), _ids.end(), id) != _ids.end();
  }

  /// True iff `j` strictly precedes `k`.
  bool precedes(VehicleId j, VehicleId k) const
  {
    const auto pj = std::find(_ids.begin(), _ids.end(), j);
    const auto pk = std::find(_ids.begin(), _ids.end(), k);
    return pj != _ids.end() && pk != _ids.end() && pj < pk;
  }

  /// Same relative order restricted to `keep`.
  PriorityOrder restricted_to(const std::vector<VehicleId>& keep) const
  {
    std::vector<VehicleId> out;
    for (const auto id : _ids)
      if (std::find(keep.begin(), keep.end(), id) != keep.end())
        out.push_back(id);
    return PriorityOrder(std::move(out));
  }

  /// True iff the order is a permutation of exactly `ids`.
  bool covers(std::vector<VehicleId> ids) const
  {
    auto mine = _ids;
    std::sort(mine.begin(), mine.end());
    std::sort(ids.begin(), ids.end());
    return mine == ids;
  }

  /// Compact form, e.g. "3142" for ids below 10; otherwise dash separated.
  std::string str() const
  {
    std::string out;
    const bool compact = std::all_of(_ids.begin(), _ids.end(),
        [](VehicleId id) { return id >= 0 && id < 10; });
    for (std::size_t i = 0; i < _ids.size(); ++i)
    {
      if (!compact && i > 0)
        out += '-';
      out += std::to_string(_ids[i]);
    }
    return out;
  }

  friend bool operator==(const PriorityOrder&, const PriorityOrder&) = default;
  friend auto operator<=>(const PriorityOrder& a, const PriorityOrder& b)
  {
    return a._ids <=> b._ids;
  }

private:
  std::vector<VehicleId> _ids;
};

} // namespace isect

#endif // ISECT__SNAPSHOT_HPP
