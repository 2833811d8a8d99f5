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

#include "modcpg/pibb.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "modcpg/error.h"

namespace modcpg::pibb {

void Validate(const PibbConfig& config) {
  if (config.rollouts < 2) {
    throw Error(ErrorCode::kInvalidArgument, "PI^BB needs at least 2 rollouts");
  }
  if (!(config.exploration_std > 0.0) || !std::isfinite(config.exploration_std)) {
    throw Error(ErrorCode::kInvalidArgument, "exploration std must be > 0");
  }
  if (!(config.decay > 0.0 && config.decay <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "decay must lie in (0, 1]");
  }
  if (!std::isfinite(config.lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be finite");
  }
}

std::vector<std::vector<double>> SampleNoise(const PibbConfig& config,
                                             int param_count, int iteration) {
  if (param_count <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "param_count must be positive");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(iteration), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> noise(config.rollouts,
                                         std::vector<double>(param_count));
  for (auto& eps : noise) {
    for (double& e : eps) e = config.exploration_std * normal(rng);
  }
  return noise;
}

void WeightRollouts(std::span<RolloutRecord> records, double lambda) {
  if (records.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least 2 rollouts");
  }
  double lo = records[0].reward;
  double hi = records[0].reward;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (!std::isfinite(records[k].reward)) {
      throw Error(ErrorCode::kNonFinite,
                  "rollout " + std::to_string(k) + " returned a non-finite reward");
    }
    lo = std::min(lo, records[k].reward);
    hi = std::max(hi, records[k].reward);
  }
  double total = 0.0;
  for (auto& r : records) {
    r.probability =
        hi > lo ? std::exp(lambda * (r.reward - lo) / (hi - lo)) : 1.0;
    total += r.probability;
  }
  for (auto& r : records) r.probability /= total;
}

std::vector<double> Update(std::span<const double> params,
                           std::span<const RolloutRecord> records) {
  std::vector<double> delta(params.size(), 0.0);
  for (const auto& r : records) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] += r.probability * r.noise[i];
    }
  }
  std::vector<double> next(params.begin(), params.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += delta[i];
  return next;
}

PibbConfig Decay(PibbConfig config) {
  config.exploration_std *= std::sqrt(config.decay);
  return config;
}

bool HasConverged(std::span<const IterationStats> trace,
                  const Convergence& convergence) {
  const std::size_t w = convergence.window;
  if (w == 0 || trace.size() < 2 * w) return false;
  double current = 0.0;
  double previous = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    current += trace[trace.size() - 1 - i].mean_return;
    previous += trace[trace.size() - 1 - w - i].mean_return;
  }
  current /= w;
  previous /= w;
  return current - previous < convergence.threshold * std::abs(previous);
}

namespace {

void EvaluateAll(const Evaluator& evaluator,
                 std::span<const std::vector<double>> candidates,
                 int iteration, int threads, std::span<double> rewards) {
  const int k_total = static_cast<int>(candidates.size());
  std::vector<std::exception_ptr> errors(k_total);
  auto work = [&](int k) {
    try {
      rewards[k] = evaluator(candidates[k], iteration, k);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  if (threads <= 1) {
    for (int k = 0; k < k_total; ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    const int n = std::min(threads, k_total);
    for (int t = 0; t < n; ++t) {
      pool.emplace_back([&, t] {
        for (int k = t; k < k_total; k += n) work(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (int k = 0; k < k_total; ++k) {
    if (!errors[k]) continue;
    std::string what = "unknown exception";
    ErrorCode code = ErrorCode::kRuntime;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const Error& e) {
      what = e.what();
      code = e.code();
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    throw Error(code, "iteration " + std::to_string(iteration) + ", rollout " +
                          std::to_string(k) + ": " + what);
  }
}

}  // namespace

RunResult Run(const PibbConfig& config, const Evaluator& evaluator,
              std::vector<double> params0, const RunOptions& options) {
  Validate(config);
  RunResult result;
  result.params = std::move(params0);
  PibbConfig current = config;
  const int n = static_cast<int>(result.params.size());
  for (int it = 0; it < options.iterations; ++it) {
    auto noise = SampleNoise(current, n, it);
    std::vector<std::vector<double>> candidates(current.rollouts);
    for (int k = 0; k < current.rollouts; ++k) {
      candidates[k] = result.params;
      for (int i = 0; i < n; ++i) candidates[k][i] += noise[k][i];
    }
    std::vector<double> rewards(current.rollouts);
    EvaluateAll(evaluator, candidates, it, options.threads, rewards);

    std::vector<RolloutRecord> records(current.rollouts);
    for (int k = 0; k < current.rollouts; ++k) {
      records[k].noise = std::move(noise[k]);
      records[k].reward = rewards[k];
    }
    WeightRollouts(records, current.lambda);

    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= rewards.size();
    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    var /= rewards.size();
    result.trace.push_back({it, mean, std::sqrt(var), current.exploration_std});

    result.params = Update(result.params, records);
    if (options.keep_history) result.history.push_back(std::move(records));
    current = Decay(current);

    if (options.convergence &&
        HasConverged(result.trace, *options.convergence)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace modcpg::pibb
