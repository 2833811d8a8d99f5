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

#include "modcpg/sensors.h"

#include <cmath>
#include <numbers>
#include <string>

#include "modcpg/error.h"

namespace modcpg::sensors {

IirChain::IirChain(int stages, double coefficient)
    : coefficient_(coefficient) {
  if (stages < 1) {
    throw Error(ErrorCode::kInvalidArgument, "IIR chain needs >= 1 stage");
  }
  if (!(coefficient > 0.0 && coefficient <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "IIR coefficient must lie in (0, 1]");
  }
  state_.assign(stages, 0.0);
}

double IirChain::Step(double x) {
  for (double& y : state_) {
    y = (1.0 - coefficient_) * y + coefficient_ * x;
    x = y;
  }
  return x;
}

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double ObstacleGate(const ObstacleSensorConfig& config,
                    std::optional<double> distance, IirChain& chain) {
  const bool detected = distance && *distance < config.cutoff_distance;
  return chain.Step(detected ? 1.0 : 0.0);
}

namespace {

SideGate Split(double value) {
  return value >= 0.0 ? SideGate{value, 0.0} : SideGate{0.0, -value};
}

}  // namespace

SideGate TiltGate(double roll, IirChain& chain) {
  return Split(chain.Step(roll));
}

SideGate HeadingGate(double actual_yaw, double desired_yaw, IirChain& chain) {
  return Split(chain.Step(WrapAngle(desired_yaw - actual_yaw)));
}

SensorPipeline::SensorPipeline(ObstacleSensorConfig config)
    : config_(config),
      obstacle_(kObstacleStages, kObstacleCoefficient),
      tilt_(1, kTiltCoefficient),
      heading_(1, kHeadingCoefficient) {}

const GateChannels& SensorPipeline::Update(const Observation& obs) {
  channels_.obstacle = ObstacleGate(config_, obs.distance, obstacle_);
  channels_.tilt = TiltGate(obs.roll, tilt_);
  channels_.heading = HeadingGate(obs.yaw, obs.desired_yaw, heading_);
  channels_.heading_error = WrapAngle(obs.desired_yaw - obs.yaw);
  return channels_;
}

bool IsKnownGateSource(std::string_view gate_source) {
  return gate_source == "obstacle" || gate_source == "tilt" ||
         gate_source == "heading" || gate_source == "command" ||
         gate_source == "none";
}

composer::Gate SensorPipeline::Resolve(std::string_view gate_source) const {
  if (gate_source == "obstacle") return {channels_.obstacle};
  if (gate_source == "tilt") return {channels_.tilt.left, channels_.tilt.right};
  if (gate_source == "heading") {
    return {channels_.heading.left, channels_.heading.right};
  }
  if (gate_source == "command") return {1.0};
  if (gate_source == "none") return {0.0};
  throw Error(ErrorCode::kUnknownName,
              "unknown gate source '" + std::string(gate_source) + "'");
}

}  // namespace modcpg::sensors
