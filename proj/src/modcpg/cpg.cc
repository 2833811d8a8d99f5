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

#include "modcpg/cpg.h"

#include <cmath>
#include <string>

#include "modcpg/error.h"

namespace modcpg::cpg {

WeightMatrix BuildWeights(const OscillatorParams& params) {
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oscillator alpha must be positive, got " +
                    std::to_string(params.alpha));
  }
  if (!(params.phi > 0.0 && params.phi < std::numbers::pi)) {
    throw Error(ErrorCode::kInvalidArgument,
                "oscillator phi must lie in (0, pi), got " +
                    std::to_string(params.phi));
  }
  const double c = std::cos(params.phi);
  const double s = std::sin(params.phi);
  return {{{params.alpha * c, params.alpha * s},
           {-params.alpha * s, params.alpha * c}}};
}

OscillatorState MakeState(const OscillatorParams& params, double o0,
                          double o1) {
  return OscillatorState{o0, o1, BuildWeights(params)};
}

OscillatorState Step(const OscillatorState& state) {
  const auto& w = state.weights;
  OscillatorState next = state;
  next.o0 = std::tanh(w[0][0] * state.o0 + w[0][1] * state.o1);
  next.o1 = std::tanh(w[1][0] * state.o0 + w[1][1] * state.o1);
  return next;
}

OscillatorState Advance(OscillatorState state, int steps) {
  for (int i = 0; i < steps; ++i) state = Step(state);
  return state;
}

std::vector<double> PositiveZeroCrossings(const OscillatorState& state,
                                          int steps) {
  std::vector<double> crossings;
  OscillatorState current = state;
  for (int t = 0; t < steps; ++t) {
    const OscillatorState next = Step(current);
    if (current.o0 < 0.0 && next.o0 >= 0.0) {
      crossings.push_back(t + current.o0 / (current.o0 - next.o0));
    }
    current = next;
  }
  return crossings;
}

std::vector<Sample> SamplePeriod(const OscillatorState& state,
                                 int step_budget) {
  // Walk forward one crossing at a time so the budget bounds the work.
  OscillatorState current = state;
  double previous_crossing = -1.0;
  long previous_period = -1;
  int period = 0;
  for (int t = 0; t < step_budget; ++t) {
    const OscillatorState next = Step(current);
    if (current.o0 < 0.0 && next.o0 >= 0.0) {
      const double crossing = t + current.o0 / (current.o0 - next.o0);
      if (previous_crossing >= 0.0) {
        const long measured = std::lround(crossing - previous_crossing);
        if (previous_period > 0 && std::labs(measured - previous_period) <= 1) {
          period = static_cast<int>(measured);
          break;
        }
        previous_period = measured;
      }
      previous_crossing = crossing;
    }
    current = next;
  }
  if (period <= 0) {
    throw Error(ErrorCode::kNonConvergence,
                "no stable oscillator period within " +
                    std::to_string(step_budget) + " steps");
  }

  std::vector<Sample> samples;
  samples.reserve(period);
  current = state;
  for (int t = 0; t < period; ++t) {
    samples.push_back({current.o0, current.o1});
    current = Step(current);
  }
  return samples;
}

std::vector<Sample> DefaultPeriod(const OscillatorParams& params) {
  return SamplePeriod(Advance(MakeState(params), kTransientSteps));
}

}  // namespace modcpg::cpg
