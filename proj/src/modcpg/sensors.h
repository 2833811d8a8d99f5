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

#ifndef MODCPG_SENSORS_H_
#define MODCPG_SENSORS_H_

#include <optional>
#include <string_view>
#include <vector>

#include "modcpg/composer.h"

namespace modcpg::sensors {

// Cascade of single-pole low-pass stages,
// y_s[t] = (1 - a) * y_s[t-1] + a * x_s[t], with x_{s+1} = y_s.
class IirChain {
 public:
  IirChain(int stages, double coefficient);

  double Step(double x);
  double output() const { return state_.back(); }
  int stages() const { return static_cast<int>(state_.size()); }
  double coefficient() const { return coefficient_; }
  const std::vector<double>& state() const { return state_; }

 private:
  double coefficient_;
  std::vector<double> state_;
};

inline constexpr double kObstacleCoefficient = 0.10;
inline constexpr int kObstacleStages = 3;
inline constexpr double kTiltCoefficient = 0.20;
inline constexpr double kHeadingCoefficient = 0.20;

struct ObstacleSensorConfig {
  double cutoff_distance = 0.115;  // m
  double mount_pitch_deg = 30.0;   // forward from straight down
  double max_range = 0.15;         // m, beyond this there is no return
};

struct SideGate {
  double left = 0.0;
  double right = 0.0;
};

// Wraps to (-pi, pi].
double WrapAngle(double angle);

// Binary detection (return closer than the cutoff) passed through the chain.
double ObstacleGate(const ObstacleSensorConfig& config,
                    std::optional<double> distance, IirChain& chain);

// Low-pass filtered roll split by sign: positive to the left legs, the
// magnitude of a negative value to the right legs.
SideGate TiltGate(double roll, IirChain& chain);

// Same split applied to the wrapped heading error desired - actual.
SideGate HeadingGate(double actual_yaw, double desired_yaw, IirChain& chain);

// All gate channels produced in one control step.
struct GateChannels {
  double obstacle = 0.0;
  SideGate tilt;
  SideGate heading;
  double heading_error = 0.0;  // unfiltered, wrapped
};

struct Observation {
  std::optional<double> distance;
  double roll = 0.0;
  double yaw = 0.0;
  double desired_yaw = 0.0;
};

// Owns the filters of one episode.
class SensorPipeline {
 public:
  explicit SensorPipeline(ObstacleSensorConfig config = {});

  const GateChannels& Update(const Observation& obs);
  const GateChannels& channels() const { return channels_; }
  const ObstacleSensorConfig& config() const { return config_; }

  // Resolves a slot's gate source: "obstacle", "tilt", "heading",
  // "command" (always 1 while the slot is enabled) or "none" (0).
  composer::Gate Resolve(std::string_view gate_source) const;

 private:
  ObstacleSensorConfig config_;
  IirChain obstacle_;
  IirChain tilt_;
  IirChain heading_;
  GateChannels channels_;
};

bool IsKnownGateSource(std::string_view gate_source);

}  // namespace modcpg::sensors

#endif  // MODCPG_SENSORS_H_
