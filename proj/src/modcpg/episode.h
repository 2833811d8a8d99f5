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

#ifndef MODCPG_EPISODE_H_
#define MODCPG_EPISODE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "modcpg/composer.h"
#include "modcpg/cpg.h"
#include "modcpg/premotor.h"
#include "modcpg/rewards.h"
#include "modcpg/sensors.h"
#include "modcpg/terrain.h"
#include "modcpg/world.h"

namespace modcpg::sim {

// The fixed part of the controller: one sampled CPG period, the RBF layer
// placed on it and the resulting per-phase activation table.
struct ControllerModel {
  cpg::OscillatorParams oscillator;
  premotor::PremotorParams premotor;
  std::vector<cpg::Sample> period;
  premotor::PremotorLayer layer;
  premotor::ActivationTable table;

  int period_length() const { return static_cast<int>(period.size()); }
};

ControllerModel MakeControllerModel(const cpg::OscillatorParams& osc = {},
                                    const premotor::PremotorParams& pm = {});

// Shared default model (built once).
const ControllerModel& DefaultControllerModel();

struct EpisodeOptions {
  double duration = 6.0;  // s
  std::uint64_t seed = 1;
  double com_noise_std = 0.005;  // m, lateral center-of-mass offset
  double desired_height = 0.135;
  std::vector<ModuleEvent> schedule;  // applied on top of terrain.modules
  sensors::ObstacleSensorConfig sensor;
};

struct StepRecord {
  long step = 0;
  double time = 0.0;
  Pose pose;
  double height = 0.0;
  int contacts = 0;
  bool fallen = false;
  std::optional<double> distance;
  sensors::GateChannels gates;
  composer::JointMatrix motor{};
  struct Contribution {
    std::string name;
    bool enabled = false;
    composer::Gate gate;
    composer::JointMatrix values{};
  };
  std::vector<Contribution> contributions;
};

using StepCallback = std::function<void(const StepRecord&)>;

// Closed loop at 60 Hz: activations -> gates -> motor output -> world step
// -> observation. Copyable, so an episode can be forked mid-run.
class Episode {
 public:
  Episode(const ControllerModel& model, composer::ControllerStack stack,
          TerrainSpec terrain, EpisodeOptions options,
          const RobotModel& robot = DefaultRobot());

  // Advances one control step. No-op once done().
  void Step(const StepCallback& on_step = nullptr);
  void Run(const StepCallback& on_step = nullptr);

  bool done() const;
  long step_count() const { return world_.step; }
  long total_steps() const { return total_steps_; }
  const WorldState& world() const { return world_; }
  const composer::ControllerStack& stack() const { return stack_; }
  const sensors::SensorPipeline& sensors() const { return pipeline_; }

  // Online stack edits, applied before the next step.
  void SetEnabled(const std::string& name, bool enabled);
  void RemoveModule(const std::string& name);
  void AddModule(composer::ModuleSlot slot);

  rewards::EpisodeStats Stats() const;

  // Per-leg (speed, stance) samples consumed by the slippage reward.
  const std::array<std::vector<rewards::TipSample>, composer::kLegs>&
  tip_traces() const {
    return tips_;
  }

 private:
  void ApplySchedule();
  void Record();

  const ControllerModel* model_;
  composer::ControllerStack stack_;
  TerrainSpec terrain_;
  EpisodeOptions options_;
  RobotModel robot_;
  sensors::SensorPipeline pipeline_;
  WorldState world_;
  sensors::Observation observation_;
  long total_steps_ = 0;
  std::size_t next_event_ = 0;
  std::vector<ModuleEvent> events_;

  // Accumulators.
  Pose start_;
  double start_height_ = 0.0;
  std::vector<rewards::PoseSample> poses_;
  std::array<std::vector<rewards::TipSample>, composer::kLegs> tips_;
  double height_sum_ = 0.0;
  double roll_abs_sum_ = 0.0;
  double heading_abs_sum_ = 0.0;
  long samples_ = 0;
  double min_width_ = 0.0;
  double min_clearance_ = 0.0;
};

struct EpisodeResult {
  rewards::EpisodeStats stats;
  long steps = 0;
  bool fallen = false;
  std::string fall_reason;
};

EpisodeResult RunEpisode(const ControllerModel& model,
                         const composer::ControllerStack& stack,
                         const TerrainSpec& terrain,
                         const EpisodeOptions& options,
                         const StepCallback& on_step = nullptr);

// Per-step log columns, in file order.
std::vector<std::string> StepLogColumns();
std::string StepLogRow(const StepRecord& record);

std::vector<std::string> ContributionColumns();
std::vector<std::string> ContributionRows(const StepRecord& record);

}  // namespace modcpg::sim

#endif  // MODCPG_EPISODE_H_
