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

#ifndef MODCPG_COMPOSER_H_
#define MODCPG_COMPOSER_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modcpg/cpg.h"
#include "modcpg/premotor.h"

namespace modcpg::composer {

inline constexpr int kLegs = 6;
inline constexpr int kJoints = 3;

// Leg order used everywhere: left front to rear, then right front to rear.
enum Leg : int { kL1 = 0, kL2, kL3, kR1, kR2, kR3 };

inline constexpr bool IsLeft(int leg) { return leg < 3; }
const char* LegName(int leg);

using JointMatrix = std::array<std::array<double, kJoints>, kLegs>;
using RoutingMask = std::array<std::array<int, kJoints>, kLegs>;

// H x 3 plastic synapses from the premotor layer to the J0/J1/J2 motor
// neurons, row-major.
struct WeightSet {
  std::string name;
  int hidden_count = 0;
  std::vector<double> weights;

  static WeightSet Zeros(std::string name, int hidden_count);

  int parameter_count() const { return hidden_count * kJoints; }
  double at(int h, int j) const { return weights[h * kJoints + j]; }
  double& at(int h, int j) { return weights[h * kJoints + j]; }
};

// Gate value for one slot. Side-split sources (tilt, heading) feed left and
// right legs from different channels; scalar sources set both sides equal.
struct Gate {
  double left = 0.0;
  double right = 0.0;

  constexpr Gate() = default;
  constexpr Gate(double both) : left(both), right(both) {}  // NOLINT
  constexpr Gate(double l, double r) : left(l), right(r) {}

  double ForLeg(int leg) const { return IsLeft(leg) ? left : right; }
};

struct ModuleSlot {
  WeightSet weight_set;
  std::string gate_source;
  RoutingMask routing{};
  bool enabled = true;

  const std::string& name() const { return weight_set.name; }
};

RoutingMask FullRouting();
RoutingMask FrontLegRouting();

struct ControllerStack {
  WeightSet base;
  std::vector<ModuleSlot> slots;
  std::array<int, kLegs> leg_phase{};
  JointMatrix joint_sign{};
};

// Tripod phasing: {L1, R2, L3} at 0 and {R1, L2, R3} at period / 2.
std::array<int, kLegs> TripodPhases(int period);

// J0 mirrored between sides (left -1, right +1); J1 and J2 unmirrored.
JointMatrix MirrorSigns();

ControllerStack MakeStack(WeightSet base, int period);

const ModuleSlot* FindSlot(const ControllerStack& stack, std::string_view name);
int EnabledSlotCount(const ControllerStack& stack);

// Throw kDuplicateName / kUnknownName. Only the named slot is touched.
ControllerStack AddModule(ControllerStack stack, ModuleSlot slot);
ControllerStack RemoveModule(ControllerStack stack, std::string_view name);
ControllerStack SetEnabled(ControllerStack stack, std::string_view name,
                           bool enabled);

using LegActivations = std::array<std::span<const double>, kLegs>;

// Leg l reads the table at phase (step_index + leg_phase[l]) mod T.
LegActivations LegActivationsAt(const premotor::ActivationTable& table,
                                long step_index, const ControllerStack& stack);

// Same as above but evaluated directly from the layer and stored period.
std::array<std::vector<double>, kLegs> ComputeLegActivations(
    const premotor::PremotorLayer& layer,
    std::span<const cpg::Sample> cpg_trace, long step_index,
    const ControllerStack& stack);

LegActivations View(const std::array<std::vector<double>, kLegs>& acts);

JointMatrix BaseContribution(const ControllerStack& stack,
                             const LegActivations& acts);
JointMatrix SlotContribution(const ModuleSlot& slot,
                             const JointMatrix& joint_sign,
                             const LegActivations& acts, const Gate& gate);

// M[l][j] = sign[l][j] * sum_h P_h^(l) * (W_base[h][j]
//           + sum_n routing_n[l][j] * S_n * W_n[h][j])
// computed as the base term plus each enabled slot's term in slot order.
// `gates` holds one entry per enabled slot, in slot order.
JointMatrix MotorOutput(const ControllerStack& stack,
                        const LegActivations& acts,
                        std::span<const Gate> gates);

// The named slot's additive term (zero if the slot is disabled).
JointMatrix ModuleContribution(const ControllerStack& stack,
                               const LegActivations& acts,
                               std::span<const Gate> gates,
                               std::string_view name);

}  // namespace modcpg::composer

#endif  // MODCPG_COMPOSER_H_
