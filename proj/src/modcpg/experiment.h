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

#ifndef MODCPG_EXPERIMENT_H_
#define MODCPG_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modcpg/pibb.h"
#include "modcpg/rewards.h"

namespace modcpg::experiment {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRunRootEnv = "MODCPG_RUN_ROOT";

// Per-behavior defaults.
double DefaultSigma(rewards::Behavior behavior);
double DefaultDuration(rewards::Behavior behavior);  // s
// Gate channel a freshly learned module of this behavior listens to.
std::string DefaultGateSource(rewards::Behavior behavior);

struct ExperimentConfig {
  rewards::Behavior behavior = rewards::Behavior::kBase;
  std::optional<std::filesystem::path> scene;  // flat ground when absent
  int iterations = 100;
  std::vector<std::uint64_t> seeds = {1};
  int rollouts = 8;
  double sigma = 0.02;
  double decay = 0.995;
  double lambda = 10.0;
  double duration = 6.0;
  // Base set first (gate "none"), then previously learned modules.
  std::vector<std::filesystem::path> frozen;
  std::optional<std::filesystem::path> init_weights;
  std::string module_name;  // defaults to the behavior name
  std::filesystem::path output = "runs/out";
  int threads = 1;
  std::optional<pibb::Convergence> convergence;
  double desired_height = 0.135;
  double com_noise_std = 0.005;
};

// Missing keys take behavior defaults; unknown keys are config errors.
// Relative input paths resolve against base_dir; a relative output resolves
// against $MODCPG_RUN_ROOT (or the working directory when unset).
ExperimentConfig ParseConfig(const nlohmann::json& doc,
                             const std::filesystem::path& base_dir);
nlohmann::json ToJson(const ExperimentConfig& config);

// Deterministic per-rollout episode seed.
std::uint64_t EpisodeSeed(std::uint64_t seed, int iteration, int rollout);

// Staged PI^BB learning; returns the manifest (also written to
// <output>/manifest.json).
nlohmann::json Learn(const ExperimentConfig& config);

struct EvaluateRequest {
  std::optional<std::filesystem::path> scene;
  std::vector<std::filesystem::path> weights;  // base first
  std::optional<std::filesystem::path> schedule;
  std::filesystem::path output = "runs/eval";
  std::optional<std::uint64_t> seed;   // defaults to the scene seed
  std::optional<double> duration;      // defaults to the scene duration
  std::optional<rewards::Behavior> behavior;
  double com_noise_std = 0.005;
  double desired_height = 0.135;
};

EvaluateRequest ParseEvaluateRequest(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir);
nlohmann::json Evaluate(const EvaluateRequest& request);

struct BenchRequest {
  int dimensions = 60;
  int iterations = 300;
  int seeds = 5;
  int rollouts = 8;
  double sigma = 0.05;
  double decay = 0.995;
  double lambda = 10.0;
  double offset = 0.5;  // per-coordinate |w* - w0|
  int threads = 1;
};

BenchRequest ParseBenchRequest(const nlohmann::json& doc);
// Sphere objective f(w) = -|w - w*|^2; reports final/initial distance.
nlohmann::json BenchPibb(const BenchRequest& request);

nlohmann::json Inspect(const std::filesystem::path& weights);

// FNV-1a over file bytes, as 16 hex digits.
std::string FileChecksum(const std::filesystem::path& path);

}  // namespace modcpg::experiment

#endif  // MODCPG_EXPERIMENT_H_
