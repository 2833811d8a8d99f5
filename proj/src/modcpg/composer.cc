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

#include "modcpg/composer.h"

#include <algorithm>
#include <string>
#include <utility>

#include "modcpg/error.h"

namespace modcpg::composer {
namespace {

void CheckActivations(const LegActivations& acts, int hidden_count) {
  for (const auto& a : acts) {
    if (static_cast<int>(a.size()) != hidden_count) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "activation vector has " + std::to_string(a.size()) +
                      " entries, weight set expects " +
                      std::to_string(hidden_count));
    }
  }
}

void CheckGates(const ControllerStack& stack, std::span<const Gate> gates) {
  const int enabled = EnabledSlotCount(stack);
  if (static_cast<int>(gates.size()) != enabled) {
    throw Error(ErrorCode::kInvalidArgument,
                "got " + std::to_string(gates.size()) + " gates for " +
                    std::to_string(enabled) + " enabled slots");
  }
}

// sum_h P_h * W[h][j] for every leg and joint.
JointMatrix Project(const WeightSet& set, const LegActivations& acts) {
  JointMatrix out{};
  for (int l = 0; l < kLegs; ++l) {
    for (int h = 0; h < set.hidden_count; ++h) {
      const double p = acts[l][h];
      for (int j = 0; j < kJoints; ++j) out[l][j] += p * set.at(h, j);
    }
  }
  return out;
}

}  // namespace

const char* LegName(int leg) {
  static constexpr const char* kNames[kLegs] = {"L1", "L2", "L3",
                                                "R1", "R2", "R3"};
  return kNames[leg];
}

WeightSet WeightSet::Zeros(std::string name, int hidden_count) {
  return WeightSet{std::move(name), hidden_count,
                   std::vector<double>(hidden_count * kJoints, 0.0)};
}

RoutingMask FullRouting() {
  RoutingMask mask;
  for (auto& leg : mask) leg.fill(1);
  return mask;
}

RoutingMask FrontLegRouting() {
  RoutingMask mask{};
  mask[kL1].fill(1);
  mask[kR1].fill(1);
  return mask;
}

std::array<int, kLegs> TripodPhases(int period) {
  const int half = period / 2;
  std::array<int, kLegs> phase{};
  phase[kL1] = 0;
  phase[kR2] = 0;
  phase[kL3] = 0;
  phase[kR1] = half;
  phase[kL2] = half;
  phase[kR3] = half;
  return phase;
}

JointMatrix MirrorSigns() {
  JointMatrix sign;
  for (int l = 0; l < kLegs; ++l) {
    sign[l] = {IsLeft(l) ? -1.0 : 1.0, 1.0, 1.0};
  }
  return sign;
}

ControllerStack MakeStack(WeightSet base, int period) {
  ControllerStack stack;
  stack.base = std::move(base);
  stack.leg_phase = TripodPhases(period);
  stack.joint_sign = MirrorSigns();
  return stack;
}

const ModuleSlot* FindSlot(const ControllerStack& stack,
                           std::string_view name) {
  for (const auto& slot : stack.slots) {
    if (slot.name() == name) return &slot;
  }
  return nullptr;
}

int EnabledSlotCount(const ControllerStack& stack) {
  return static_cast<int>(std::count_if(
      stack.slots.begin(), stack.slots.end(),
      [](const ModuleSlot& s) { return s.enabled; }));
}

ControllerStack AddModule(ControllerStack stack, ModuleSlot slot) {
  if (slot.name() == stack.base.name || FindSlot(stack, slot.name())) {
    throw Error(ErrorCode::kDuplicateName,
                "module '" + slot.name() + "' already present");
  }
  if (slot.weight_set.hidden_count != stack.base.hidden_count) {
    throw Error(ErrorCode::kDimensionMismatch,
                "module '" + slot.name() + "' has H=" +
                    std::to_string(slot.weight_set.hidden_count) +
                    ", base has H=" +
                    std::to_string(stack.base.hidden_count));
  }
  stack.slots.push_back(std::move(slot));
  return stack;
}

ControllerStack RemoveModule(ControllerStack stack, std::string_view name) {
  auto it = std::find_if(stack.slots.begin(), stack.slots.end(),
                         [&](const ModuleSlot& s) { return s.name() == name; });
  if (it == stack.slots.end()) {
    throw Error(ErrorCode::kUnknownName,
                "no module named '" + std::string(name) + "'");
  }
  stack.slots.erase(it);
  return stack;
}

ControllerStack SetEnabled(ControllerStack stack, std::string_view name,
                           bool enabled) {
  for (auto& slot : stack.slots) {
    if (slot.name() == name) {
      slot.enabled = enabled;
      return stack;
    }
  }
  throw Error(ErrorCode::kUnknownName,
              "no module named '" + std::string(name) + "'");
}

LegActivations LegActivationsAt(const premotor::ActivationTable& table,
                                long step_index,
                                const ControllerStack& stack) {
  LegActivations acts;
  for (int l = 0; l < kLegs; ++l) {
    acts[l] = table.Row(step_index + stack.leg_phase[l]);
  }
  return acts;
}

std::array<std::vector<double>, kLegs> ComputeLegActivations(
    const premotor::PremotorLayer& layer,
    std::span<const cpg::Sample> cpg_trace, long step_index,
    const ControllerStack& stack) {
  const long period = static_cast<long>(cpg_trace.size());
  std::array<std::vector<double>, kLegs> acts;
  for (int l = 0; l < kLegs; ++l) {
    long t = (step_index + stack.leg_phase[l]) % period;
    if (t < 0) t += period;
    acts[l] = premotor::Activations(layer, cpg_trace[t].o0, cpg_trace[t].o1);
  }
  return acts;
}

LegActivations View(const std::array<std::vector<double>, kLegs>& acts) {
  LegActivations view;
  for (int l = 0; l < kLegs; ++l) view[l] = acts[l];
  return view;
}

JointMatrix BaseContribution(const ControllerStack& stack,
                             const LegActivations& acts) {
  CheckActivations(acts, stack.base.hidden_count);
  JointMatrix out = Project(stack.base, acts);
  for (int l = 0; l < kLegs; ++l) {
    for (int j = 0; j < kJoints; ++j) out[l][j] *= stack.joint_sign[l][j];
  }
  return out;
}

JointMatrix SlotContribution(const ModuleSlot& slot,
                             const JointMatrix& joint_sign,
                             const LegActivations& acts, const Gate& gate) {
  CheckActivations(acts, slot.weight_set.hidden_count);
  JointMatrix out = Project(slot.weight_set, acts);
  for (int l = 0; l < kLegs; ++l) {
    const double s = gate.ForLeg(l);
    for (int j = 0; j < kJoints; ++j) {
      out[l][j] *= joint_sign[l][j] * slot.routing[l][j] * s;
    }
  }
  return out;
}

JointMatrix MotorOutput(const ControllerStack& stack,
                        const LegActivations& acts,
                        std::span<const Gate> gates) {
  CheckGates(stack, gates);
  JointMatrix out = BaseContribution(stack, acts);
  std::size_t g = 0;
  for (const auto& slot : stack.slots) {
    if (!slot.enabled) continue;
    const JointMatrix term =
        SlotContribution(slot, stack.joint_sign, acts, gates[g++]);
    for (int l = 0; l < kLegs; ++l) {
      for (int j = 0; j < kJoints; ++j) out[l][j] += term[l][j];
    }
  }
  return out;
}

JointMatrix ModuleContribution(const ControllerStack& stack,
                               const LegActivations& acts,
                               std::span<const Gate> gates,
                               std::string_view name) {
  CheckGates(stack, gates);
  std::size_t g = 0;
  for (const auto& slot : stack.slots) {
    if (slot.name() == name) {
      if (!slot.enabled) return JointMatrix{};
      return SlotContribution(slot, stack.joint_sign, acts, gates[g]);
    }
    if (slot.enabled) ++g;
  }
  throw Error(ErrorCode::kUnknownName,
              "no module named '" + std::string(name) + "'");
}

}  // namespace modcpg::composer
