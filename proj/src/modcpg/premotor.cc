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

#include "modcpg/premotor.h"

#include <cmath>
#include <string>

#include "modcpg/error.h"

namespace modcpg::premotor {

int MeanIndex(int h, int hidden_count, int period) {
  const double position =
      static_cast<double>(h) * period / static_cast<double>(hidden_count - 1);
  const long index = std::lround(position);
  return static_cast<int>(index > period - 1 ? period - 1 : index);
}

PremotorLayer PlaceMeans(std::span<const cpg::Sample> period_samples,
                         const PremotorParams& params) {
  if (params.hidden_count < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "premotor layer needs at least 2 neurons");
  }
  if (!(params.variance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "premotor variance must be positive");
  }
  if (period_samples.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty CPG period");
  }
  const int period = static_cast<int>(period_samples.size());
  if (params.hidden_count > period) {
    throw Error(ErrorCode::kInvalidArgument,
                "hidden_count " + std::to_string(params.hidden_count) +
                    " exceeds period length " + std::to_string(period));
  }
  PremotorLayer layer;
  layer.params = params;
  layer.means.reserve(params.hidden_count);
  for (int h = 0; h < params.hidden_count; ++h) {
    layer.means.push_back(
        period_samples[MeanIndex(h, params.hidden_count, period)]);
  }
  return layer;
}

void Activations(const PremotorLayer& layer, double o0, double o1,
                 std::span<double> out) {
  const double inv_variance = 1.0 / layer.params.variance;
  for (std::size_t h = 0; h < layer.means.size(); ++h) {
    const double d0 = o0 - layer.means[h].o0;
    const double d1 = o1 - layer.means[h].o1;
    out[h] = std::exp(-(d0 * d0 + d1 * d1) * inv_variance);
  }
}

std::vector<double> Activations(const PremotorLayer& layer, double o0,
                                double o1) {
  std::vector<double> out(layer.means.size());
  Activations(layer, o0, o1, out);
  return out;
}

ActivationTable::ActivationTable(const PremotorLayer& layer,
                                 std::span<const cpg::Sample> period_samples)
    : period_(static_cast<int>(period_samples.size())),
      hidden_(layer.hidden_count()),
      values_(static_cast<std::size_t>(period_) * hidden_) {
  for (int t = 0; t < period_; ++t) {
    Activations(layer, period_samples[t].o0, period_samples[t].o1,
                std::span<double>(values_).subspan(
                    static_cast<std::size_t>(t) * hidden_, hidden_));
  }
}

std::span<const double> ActivationTable::Row(long phase) const {
  long t = phase % period_;
  if (t < 0) t += period_;
  return std::span<const double>(values_).subspan(
      static_cast<std::size_t>(t) * hidden_, hidden_);
}

}  // namespace modcpg::premotor
