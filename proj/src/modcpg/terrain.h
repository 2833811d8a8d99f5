// Copyright 2026 The modcpg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MODCPG_TERRAIN_H_
#define MODCPG_TERRAIN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "modcpg/robot.h"

namespace modcpg::sim {

// Axis-aligned box resting in the world; `size` holds full extents.
struct Box {
  Vec3 center;
  Vec3 size;
  double friction = 1.0;

  double top() const { return center.z + 0.5 * size.z; }
  double bottom() const { return center.z - 0.5 * size.z; }
  bool ContainsXY(double x, double y) const;
};

struct Waypoint {
  double time = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct ModuleEvent {
  double time = 0.0;
  std::string name;
  bool enabled = true;
};

struct StartPose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

// Flat ground at z = 0 plus boxes, a waypoint schedule and a module-enable
// schedule.
struct TerrainSpec {
  std::vector<Box> boxes;
  double ground_friction = 1.0;
  std::vector<Waypoint> waypoints;
  std::vector<ModuleEvent> modules;
  StartPose start;
  double duration = 6.0;
  std::uint64_t seed = 1;

  // Height of the highest surface under (x, y), and its friction.
  double HeightAt(double x, double y) const;
  double FrictionAt(double x, double y) const;

  // Distance along the unit direction `dir` to the first surface, if any
  // lies within max_range.
  std::optional<double> Raycast(const Vec3& origin, const Vec3& dir,
                                double max_range) const;

  // Desired yaw at `time` for a robot at (x, y): towards the most recently
  // activated waypoint, or `fallback` before the first activation.
  double DesiredYaw(double time, double x, double y, double fallback) const;
};

// Throws kConfig for degenerate boxes, friction outside [0, 1], or a
// non-positive duration.
void Validate(const TerrainSpec& terrain);

TerrainSpec ParseScene(const std::string& text);
TerrainSpec LoadScene(const std::filesystem::path& path);
std::vector<ModuleEvent> LoadSchedule(const std::filesystem::path& path);
std::string SerializeScene(const TerrainSpec& terrain);

}  // namespace modcpg::sim

#endif  // MODCPG_TERRAIN_H_
