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

#include "modcpg/rewards.h"

#include <algorithm>
#include <cmath>

#include "modcpg/error.h"

namespace modcpg::rewards {

const std::array<const char*, kStatCount> kStatNames = {
    "d", "gamma", "xi", "slip", "tau_mu", "tau_sigma",
    "delta", "lambda_y", "lambda_z", "d_z"};

const char* BehaviorName(Behavior behavior) {
  switch (behavior) {
    case Behavior::kBase:
      return "base";
    case Behavior::kObstacle:
      return "obstacle";
    case Behavior::kPosture:
      return "posture";
    case Behavior::kDirection:
      return "direction";
    case Behavior::kHigh:
      return "high";
    case Behavior::kLow:
      return "low";
    case Behavior::kNarrow:
      return "narrow";
    case Behavior::kPipe:
      return "pipe";
    case Behavior::kWall:
      return "wall";
  }
  return "?";
}

std::optional<Behavior> ParseBehavior(std::string_view name) {
  for (Behavior b : kAllBehaviors) {
    if (name == BehaviorName(b)) return b;
  }
  return std::nullopt;
}

bool IsAdvanced(Behavior behavior) {
  switch (behavior) {
    case Behavior::kHigh:
    case Behavior::kLow:
    case Behavior::kNarrow:
    case Behavior::kPipe:
    case Behavior::kWall:
      return true;
    default:
      return false;
  }
}

std::array<double, kStatCount> ToArray(const EpisodeStats& s) {
  return {s.distance,  s.instability,   s.height_error, s.slippage,
          s.tilt_mean, s.tilt_var,      s.heading_error, s.min_width,
          s.min_height, s.ascent};
}

EpisodeStats FromArray(const std::array<double, kStatCount>& v) {
  return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
}

const RewardWeights& WeightsFor(Behavior behavior) {
  // The pipe formula names lambda_y but assigns it no value; it stays 0.
  static const RewardWeights kBase{.distance = 3, .instability = 1,
                                   .height_error = 3, .slippage = 0.75};
  static const RewardWeights kObstacle{.distance = 0.5, .instability = 1,
                                       .height_error = 0, .slippage = 0.5};
  static const RewardWeights kPosture{.distance = 2, .instability = 1,
                                      .height_error = 0, .slippage = 0.5,
                                      .tilt_mean = 40, .tilt_var = 10};
  static const RewardWeights kDirection{.distance = 0.1, .instability = 1,
                                        .height_error = 3, .slippage = 1,
                                        .heading_error = 6};
  static const RewardWeights kHigh{.distance = 3, .instability = 10,
                                   .slippage = 1, .min_width = -2,
                                   .min_height = -15};
  static const RewardWeights kLow{.distance = 3, .instability = 10,
                                  .slippage = 1, .min_width = -2,
                                  .min_height = 60};
  static const RewardWeights kNarrow{.distance = 3, .instability = 10,
                                     .slippage = 1, .min_width = 60,
                                     .min_height = -15};
  static const RewardWeights kPipe{.distance = 5, .instability = 1,
                                   .slippage = 0.75, .min_width = 0};
  static const RewardWeights kWall{.distance = 0.6, .instability = 1,
                                   .slippage = 0.75, .ascent = -6};
  switch (behavior) {
    case Behavior::kBase:
      return kBase;
    case Behavior::kObstacle:
      return kObstacle;
    case Behavior::kPosture:
      return kPosture;
    case Behavior::kDirection:
      return kDirection;
    case Behavior::kHigh:
      return kHigh;
    case Behavior::kLow:
      return kLow;
    case Behavior::kNarrow:
      return kNarrow;
    case Behavior::kPipe:
      return kPipe;
    case Behavior::kWall:
      return kWall;
  }
  return kBase;
}

double Slippage(std::span<const std::vector<TipSample>> legs,
                double threshold) {
  double worst = 0.0;
  for (const auto& leg : legs) {
    long contact = 0;
    long slipping = 0;
    for (const auto& s : leg) {
      if (!s.in_contact) continue;
      ++contact;
      if (s.speed > threshold) ++slipping;
    }
    if (contact > 0) {
      worst = std::max(worst, static_cast<double>(slipping) / contact);
    }
  }
  return worst;
}

double Instability(std::span<const PoseSample> poses) {
  if (poses.empty()) return 0.0;
  const double n = static_cast<double>(poses.size());
  auto variance = [&](auto field) {
    // Shifted by the first sample so a constant signal gives exactly 0.
    const double first = field(poses.front());
    double mean = 0.0;
    for (const auto& p : poses) mean += field(p) - first;
    mean /= n;
    double var = 0.0;
    for (const auto& p : poses) {
      const double d = (field(p) - first) - mean;
      var += d * d;
    }
    return var / n;
  };
  const double total =
      variance([](const PoseSample& p) { return p.yaw; }) +
      variance([](const PoseSample& p) { return p.pitch; }) +
      variance([](const PoseSample& p) { return p.roll; }) +
      variance([](const PoseSample& p) { return p.height; });
  if (!std::isfinite(total)) return kInstabilityCap;
  return std::min(total, kInstabilityCap);
}

double Return(Behavior behavior, const EpisodeStats& stats) {
  for (double v : ToArray(stats)) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNonFinite, "episode stats contain non-finite values");
    }
  }
  const RewardWeights& w = WeightsFor(behavior);
  const double penalty =
      w.instability * stats.instability + w.height_error * stats.height_error +
      w.slippage * stats.slippage + w.tilt_mean * stats.tilt_mean +
      w.tilt_var * stats.tilt_var + w.heading_error * stats.heading_error +
      w.min_width * stats.min_width + w.min_height * stats.min_height +
      w.ascent * stats.ascent;
  return w.distance * stats.distance - penalty;
}

double ReturnBase(const EpisodeStats& s) { return Return(Behavior::kBase, s); }
double ReturnObstacle(const EpisodeStats& s) {
  return Return(Behavior::kObstacle, s);
}
double ReturnPosture(const EpisodeStats& s) {
  return Return(Behavior::kPosture, s);
}
double ReturnDirection(const EpisodeStats& s) {
  return Return(Behavior::kDirection, s);
}
double ReturnHigh(const EpisodeStats& s) { return Return(Behavior::kHigh, s); }
double ReturnLow(const EpisodeStats& s) { return Return(Behavior::kLow, s); }
double ReturnNarrow(const EpisodeStats& s) {
  return Return(Behavior::kNarrow, s);
}
double ReturnPipe(const EpisodeStats& s) { return Return(Behavior::kPipe, s); }
double ReturnWall(const EpisodeStats& s) { return Return(Behavior::kWall, s); }

}  // namespace modcpg::rewards
