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

#ifndef MODCPG_CPG_H_
#define MODCPG_CPG_H_

#include <array>
#include <numbers>
#include <vector>

namespace modcpg::cpg {

// Two-neuron SO(2) oscillator. alpha sets amplitude/nonlinearity, phi the
// phase advance per step (radians).
struct OscillatorParams {
  double alpha = 1.01;
  double phi = 0.01 * std::numbers::pi;
};

using WeightMatrix = std::array<std::array<double, 2>, 2>;

struct OscillatorState {
  double o0 = 0.2;
  double o1 = 0.0;
  WeightMatrix weights{};
};

struct Sample {
  double o0 = 0.0;
  double o1 = 0.0;

  bool operator==(const Sample&) const = default;
};

// alpha * [[cos phi, sin phi], [-sin phi, cos phi]]. Throws kInvalidArgument
// for alpha <= 0 or phi outside (0, pi).
WeightMatrix BuildWeights(const OscillatorParams& params);

// Fresh oscillator at the canonical initial condition (0.2, 0).
OscillatorState MakeState(const OscillatorParams& params, double o0 = 0.2,
                          double o1 = 0.0);

// o_i(t+1) = tanh(sum_j w_ij o_j(t)).
OscillatorState Step(const OscillatorState& state);

// Steps `steps` times and returns the final state.
OscillatorState Advance(OscillatorState state, int steps);

inline constexpr int kTransientSteps = 2000;
inline constexpr int kDefaultPeriodBudget = 20000;

// Positive-going zero crossings of o0 located by linear interpolation,
// expressed in fractional steps relative to `state`.
std::vector<double> PositiveZeroCrossings(const OscillatorState& state,
                                          int steps);

// Detects the period T from zero crossings of o0 and returns the T samples
// of one full cycle, starting at `state`'s current outputs. Requires two
// consecutive measured periods to agree within one step; throws
// kNonConvergence when that does not happen within `step_budget` steps.
std::vector<Sample> SamplePeriod(const OscillatorState& state,
                                 int step_budget = kDefaultPeriodBudget);

// Settles the default oscillator past its transient and samples one period.
std::vector<Sample> DefaultPeriod(const OscillatorParams& params = {});

}  // namespace modcpg::cpg

#endif  // MODCPG_CPG_H_
