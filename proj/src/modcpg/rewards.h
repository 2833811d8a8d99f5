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

#ifndef MODCPG_REWARDS_H_
#define MODCPG_REWARDS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modcpg::rewards {

enum class Behavior {
  kBase,
  kObstacle,
  kPosture,
  kDirection,
  kHigh,
  kLow,
  kNarrow,
  kPipe,
  kWall,
};

inline constexpr std::array<Behavior, 9> kAllBehaviors = {
    Behavior::kBase, Behavior::kObstacle, Behavior::kPosture,
    Behavior::kDirection, Behavior::kHigh, Behavior::kLow,
    Behavior::kNarrow, Behavior::kPipe, Behavior::kWall};

const char* BehaviorName(Behavior behavior);
std::optional<Behavior> ParseBehavior(std::string_view name);
bool IsAdvanced(Behavior behavior);

// Trajectory statistics of one episode.
struct EpisodeStats {
  double distance = 0.0;       // d, m along the initial heading
  double instability = 0.0;    // gamma, capped at 8
  double height_error = 0.0;   // xi, m
  double slippage = 0.0;       // varsigma, [0, 1]
  double tilt_mean = 0.0;      // tau_mu, rad
  double tilt_var = 0.0;       // tau_sigma, rad^2
  double heading_error = 0.0;  // delta, rad
  double min_width = 0.0;      // lambda_y, m
  double min_height = 0.0;     // lambda_z, m
  double ascent = 0.0;         // d_z, m
};

inline constexpr int kStatCount = 10;
std::array<double, kStatCount> ToArray(const EpisodeStats& stats);
EpisodeStats FromArray(const std::array<double, kStatCount>& values);
extern const std::array<const char*, kStatCount> kStatNames;

// R = w_d * d - (w_gamma * gamma + w_xi * xi + w_slip * slip + ...).
// Every penalty weight enters inside the subtracted sum exactly as tabulated,
// so negative weights act as bonuses.
struct RewardWeights {
  double distance = 0.0;
  double instability = 0.0;
  double height_error = 0.0;
  double slippage = 0.0;
  double tilt_mean = 0.0;
  double tilt_var = 0.0;
  double heading_error = 0.0;
  double min_width = 0.0;
  double min_height = 0.0;
  double ascent = 0.0;
};

const RewardWeights& WeightsFor(Behavior behavior);

inline constexpr double kInstabilityCap = 8.0;
inline constexpr double kSlipSpeedThreshold = 0.01;  // m/s

// One sample of a leg tip: tangential speed and ground contact.
struct TipSample {
  double speed = 0.0;
  bool in_contact = false;
};

// Per leg: contact steps moving faster than the threshold over contact steps;
// the worst leg wins. Legs without contact contribute 0.
double Slippage(std::span<const std::vector<TipSample>> legs,
                double threshold = kSlipSpeedThreshold);

struct PoseSample {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;
  double height = 0.0;
};

// Sum of population variances of yaw, pitch, roll and height, capped at 8.
double Instability(std::span<const PoseSample> poses);

// Throws kNonFinite for non-finite stats.
double Return(Behavior behavior, const EpisodeStats& stats);

double ReturnBase(const EpisodeStats& stats);
double ReturnObstacle(const EpisodeStats& stats);
double ReturnPosture(const EpisodeStats& stats);
double ReturnDirection(const EpisodeStats& stats);
double ReturnHigh(const EpisodeStats& stats);
double ReturnLow(const EpisodeStats& stats);
double ReturnNarrow(const EpisodeStats& stats);
double ReturnPipe(const EpisodeStats& stats);
double ReturnWall(const EpisodeStats& stats);

}  // namespace modcpg::rewards

#endif  // MODCPG_REWARDS_H_
