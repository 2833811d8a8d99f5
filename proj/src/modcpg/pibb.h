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

#ifndef MODCPG_PIBB_H_
#define MODCPG_PIBB_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace modcpg::pibb {

// Black-box policy improvement. `exploration_std` is the current per-parameter
// standard deviation; Decay() shrinks the variance by `decay`.
struct PibbConfig {
  int rollouts = 8;
  double exploration_std = 0.02;
  double decay = 0.995;
  double lambda = 10.0;
  std::uint64_t seed = 1;
};

void Validate(const PibbConfig& config);

struct RolloutRecord {
  std::vector<double> noise;
  double reward = 0.0;
  double probability = 0.0;
};

// K zero-mean Gaussian noise vectors at the current std. The stream is a
// pure function of (seed, iteration).
std::vector<std::vector<double>> SampleNoise(const PibbConfig& config,
                                             int param_count, int iteration);

// S_k = exp(lambda * (R_k - min R) / (max R - min R)), P_k = S_k / sum S.
// Equal returns give uniform probabilities. Throws kNonFinite on NaN/inf.
void WeightRollouts(std::span<RolloutRecord> records, double lambda);

// params + sum_k P_k * eps_k.
std::vector<double> Update(std::span<const double> params,
                           std::span<const RolloutRecord> records);

// Variance *= decay, i.e. std *= sqrt(decay).
PibbConfig Decay(PibbConfig config);

struct Convergence {
  int window = 10;
  double threshold = 0.01;
};

struct IterationStats {
  int iteration = 0;
  double mean_return = 0.0;
  double sd_return = 0.0;
  double sigma = 0.0;  // std used for this iteration's noise
};

struct RunResult {
  std::vector<double> params;
  std::vector<IterationStats> trace;
  // Rollout records of every iteration, in iteration order.
  std::vector<std::vector<RolloutRecord>> history;
  bool converged = false;
};

// Evaluates perturbed params for (iteration, rollout). Must be deterministic
// in its arguments.
using Evaluator = std::function<double(std::span<const double> params,
                                       int iteration, int rollout)>;

struct RunOptions {
  int iterations = 100;
  std::optional<Convergence> convergence;
  int threads = 1;  // rollouts evaluated concurrently; results reduced in order
  bool keep_history = false;
};

// Runs the full loop: sample noise, evaluate K rollouts, weight, update,
// decay. Evaluator exceptions are rethrown tagged with iteration and rollout.
RunResult Run(const PibbConfig& config, const Evaluator& evaluator,
              std::vector<double> params0, const RunOptions& options);

// Windowed stopping rule: the mean of the last `window` iteration means
// improved on the preceding window by less than threshold * |previous|.
bool HasConverged(std::span<const IterationStats> trace,
                  const Convergence& convergence);

}  // namespace modcpg::pibb

#endif  // MODCPG_PIBB_H_
