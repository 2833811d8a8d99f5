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

#ifndef MODCPG_PREMOTOR_H_
#define MODCPG_PREMOTOR_H_

#include <span>
#include <vector>

#include "modcpg/cpg.h"

namespace modcpg::premotor {

struct PremotorParams {
  int hidden_count = 20;
  double variance = 0.04;
};

// H Gaussian RBF neurons with frozen 2-D means on the CPG orbit and a shared
// variance.
struct PremotorLayer {
  std::vector<cpg::Sample> means;
  PremotorParams params;

  int hidden_count() const { return static_cast<int>(means.size()); }
};

// Index of mean h (0-based) inside a period of length T:
// round(h * T / (H - 1)), clamped to T - 1.
int MeanIndex(int h, int hidden_count, int period);

// Places H means uniformly along one sampled CPG period. Throws
// kInvalidArgument for invalid params, an empty period, or H > T.
PremotorLayer PlaceMeans(std::span<const cpg::Sample> period_samples,
                         const PremotorParams& params);

// P_h = exp(-((o0 - mu_h0)^2 + (o1 - mu_h1)^2) / variance).
std::vector<double> Activations(const PremotorLayer& layer, double o0,
                                double o1);
void Activations(const PremotorLayer& layer, double o0, double o1,
                 std::span<double> out);

// Activation vectors for every phase of a sampled period, row-major T x H.
class ActivationTable {
 public:
  ActivationTable() = default;
  ActivationTable(const PremotorLayer& layer,
                  std::span<const cpg::Sample> period_samples);

  int period() const { return period_; }
  int hidden_count() const { return hidden_; }

  // Row for phase index `phase` (taken modulo the period).
  std::span<const double> Row(long phase) const;

 private:
  int period_ = 0;
  int hidden_ = 0;
  std::vector<double> values_;
};

}  // namespace modcpg::premotor

#endif  // MODCPG_PREMOTOR_H_
