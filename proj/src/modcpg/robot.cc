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

#include "modcpg/robot.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modcpg::sim {

using composer::kL1;
using composer::kL2;
using composer::kL3;
using composer::kR1;
using composer::kR2;
using composer::kR3;

RobotModel DefaultRobot() {
  RobotModel m;
  constexpr double kPi = std::numbers::pi;
  m.hips[kL1] = {0.15, 0.08};
  m.hips[kL2] = {0.0, 0.10};
  m.hips[kL3] = {-0.15, 0.08};
  m.hips[kR1] = {0.15, -0.08};
  m.hips[kR2] = {0.0, -0.10};
  m.hips[kR3] = {-0.15, -0.08};
  m.mount_yaw[kL1] = kPi / 3.0;
  m.mount_yaw[kL2] = kPi / 2.0;
  m.mount_yaw[kL3] = 2.0 * kPi / 3.0;
  m.mount_yaw[kR1] = -kPi / 3.0;
  m.mount_yaw[kR2] = -kPi / 2.0;
  m.mount_yaw[kR3] = -2.0 * kPi / 3.0;
  m.limits = {JointLimit{-0.8, 0.8}, JointLimit{-1.0, 1.0},
              JointLimit{-1.0, 1.0}};
  // Tibia depression that puts the tip neutral_height below the hip.
  m.tibia_neutral = std::asin(
      (m.neutral_height + m.femur * std::sin(m.femur_neutral)) / m.tibia);
  return m;
}

Vec3 LegTip(const RobotModel& model, int leg, const JointAngles& q) {
  const double heading = model.mount_yaw[leg] + q[0];
  const double elevation = model.femur_neutral + q[1];
  const double depression = model.tibia_neutral + q[2] - q[1];
  const double radial = model.coxa + model.femur * std::cos(elevation) +
                        model.tibia * std::cos(depression);
  const double height =
      model.femur * std::sin(elevation) - model.tibia * std::sin(depression);
  return {model.hips[leg].x + radial * std::cos(heading),
          model.hips[leg].y + radial * std::sin(heading), height};
}

double StretchedLength(const RobotModel& model) {
  return model.coxa + model.femur + model.tibia;
}

double Clamp(const RobotModel& model, int joint, double angle) {
  return std::clamp(angle, model.limits[joint].lower,
                    model.limits[joint].upper);
}

}  // namespace modcpg::sim
