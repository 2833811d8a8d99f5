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

#ifndef MODCPG_ROBOT_H_
#define MODCPG_ROBOT_H_

#include <array>

#include "modcpg/composer.h"

namespace modcpg::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct JointLimit {
  double lower = -1.0;
  double upper = 1.0;
};

using JointAngles = std::array<double, composer::kJoints>;

// Kinematic hexapod. Joint angles are offsets from the neutral stance:
// J0 yaws the leg about the hip (counter-clockwise positive), J1 raises the
// femur, J2 flexes the tibia downward relative to the femur.
struct RobotModel {
  double body_length = 0.42;
  double body_half_thickness = 0.03;
  double coxa = 0.04;
  double femur = 0.08;
  double tibia = 0.13;
  double neutral_height = 0.135;
  double femur_neutral = -0.2;  // femur elevation at J1 = 0
  double tibia_neutral = 0.0;   // tibia depression at J1 = J2 = 0
  double head_offset = 0.21;    // distance sensor position along body x
  double servo_time_constant = 0.05;  // s
  std::array<Vec2, composer::kLegs> hips{};
  std::array<double, composer::kLegs> mount_yaw{};
  std::array<JointLimit, composer::kJoints> limits{};
};

RobotModel DefaultRobot();

// Tip position in the body frame (origin at the body center, z up).
Vec3 LegTip(const RobotModel& model, int leg, const JointAngles& q);

// Reach of a leg with femur and tibia both horizontal.
double StretchedLength(const RobotModel& model);

double Clamp(const RobotModel& model, int joint, double angle);

}  // namespace modcpg::sim

#endif  // MODCPG_ROBOT_H_
