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

#ifndef MODCPG_WORLD_H_
#define MODCPG_WORLD_H_

#include <array>
#include <string>

#include "modcpg/composer.h"
#include "modcpg/robot.h"
#include "modcpg/sensors.h"
#include "modcpg/terrain.h"

namespace modcpg::sim {

inline constexpr double kControlRate = 60.0;  // Hz
inline constexpr double kDt = 1.0 / kControlRate;
inline constexpr double kContactTolerance = 1e-9;
inline constexpr double kStubTolerance = 0.005;  // m below a box top
inline constexpr double kFullTractionFriction = 0.5;
inline constexpr double kFallHeightFraction = 0.2;
inline constexpr double kFallAngle = 60.0 * 3.14159265358979323846 / 180.0;

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double yaw = 0.0;
  double pitch = 0.0;  // nose up positive
  double roll = 0.0;   // left side up positive
};

struct LegState {
  JointAngles q{};
  Vec3 tip_body;
  Vec3 tip_world;
  bool contact = false;
  bool stance = false;   // in contact on this and the previous step
  bool stubbed = false;  // swing tip blocked by a box face
  double tip_speed = 0.0;  // tangential, m/s
};

struct WorldState {
  Pose pose;
  std::array<LegState, composer::kLegs> legs{};
  bool belly_contact = false;
  long step = 0;
  double com_offset_y = 0.0;
  bool fallen = false;
  std::string fall_reason;

  int ContactCount() const;
  double HeightAboveGround(const TerrainSpec& terrain) const;
};

// Robot standing at the scene's start pose with all joints neutral.
WorldState InitialState(const RobotModel& model, const TerrainSpec& terrain,
                        double com_offset_y = 0.0);

// One quasi-static control step. Joints track the (clamped) commands with a
// first-order lag; the body rests on the upper support plane of the leg tips
// above the center of mass; stance tips anchor the horizontal motion through
// a friction-weighted least-squares rigid fit, and whatever the fit cannot
// honor shows up as tip slip.
WorldState StepWorld(const WorldState& state,
                     const composer::JointMatrix& commands,
                     const TerrainSpec& terrain, const RobotModel& model);

// Body-to-world rotation applied to a body-frame vector.
Vec3 BodyToWorld(const Pose& pose, const Vec3& v);

// Distance sensor reading along the mounted ray; no value when nothing is
// within the sensor range.
std::optional<double> DistanceReading(const WorldState& state,
                                      const TerrainSpec& terrain,
                                      const sensors::ObstacleSensorConfig& cfg,
                                      const RobotModel& model);

sensors::Observation Observe(const WorldState& state,
                             const TerrainSpec& terrain,
                             const sensors::ObstacleSensorConfig& cfg,
                             const RobotModel& model);

}  // namespace modcpg::sim

#endif  // MODCPG_WORLD_H_
