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

#include "modcpg/episode.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "modcpg/error.h"

namespace modcpg::sim {

using composer::kJoints;
using composer::kLegs;

ControllerModel MakeControllerModel(const cpg::OscillatorParams& osc,
                                    const premotor::PremotorParams& pm) {
  ControllerModel m;
  m.oscillator = osc;
  m.premotor = pm;
  m.period = cpg::DefaultPeriod(osc);
  m.layer = premotor::PlaceMeans(m.period, pm);
  m.table = premotor::ActivationTable(m.layer, m.period);
  return m;
}

const ControllerModel& DefaultControllerModel() {
  static const ControllerModel model = MakeControllerModel();
  return model;
}

Episode::Episode(const ControllerModel& model, composer::ControllerStack stack,
                 TerrainSpec terrain, EpisodeOptions options,
                 const RobotModel& robot)
    : model_(&model),
      stack_(std::move(stack)),
      terrain_(std::move(terrain)),
      options_(std::move(options)),
      robot_(robot),
      pipeline_(options_.sensor) {
  if (!(options_.duration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "episode duration must be > 0");
  }
  if (stack_.base.hidden_count != model.layer.hidden_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "base weight set H does not match the premotor layer");
  }
  for (const auto& slot : stack_.slots) {
    if (!sensors::IsKnownGateSource(slot.gate_source)) {
      throw Error(ErrorCode::kConfig, "module '" + slot.name() +
                                          "' has unknown gate source '" +
                                          slot.gate_source + "'");
    }
  }
  events_ = terrain_.modules;
  events_.insert(events_.end(), options_.schedule.begin(),
                 options_.schedule.end());
  std::stable_sort(events_.begin(), events_.end(),
                   [](const ModuleEvent& a, const ModuleEvent& b) {
                     return a.time < b.time;
                   });
  for (const auto& e : events_) {
    if (!composer::FindSlot(stack_, e.name)) {
      throw Error(ErrorCode::kUnknownName,
                  "schedule references unknown module '" + e.name + "'");
    }
  }

  total_steps_ = std::lround(options_.duration * kControlRate);
  double offset = 0.0;
  if (options_.com_noise_std > 0.0) {
    std::mt19937_64 rng(options_.seed);
    std::normal_distribution<double> normal(0.0, options_.com_noise_std);
    offset = normal(rng);
  }
  world_ = InitialState(robot_, terrain_, offset);
  observation_ = Observe(world_, terrain_, options_.sensor, robot_);
  start_ = world_.pose;
  start_height_ = world_.HeightAboveGround(terrain_);
  min_width_ = std::numeric_limits<double>::infinity();
  min_clearance_ = std::numeric_limits<double>::infinity();
  poses_.reserve(total_steps_ + 1);
  for (auto& t : tips_) t.reserve(total_steps_);
  Record();
}

bool Episode::done() const {
  return world_.fallen || world_.step >= total_steps_;
}

void Episode::SetEnabled(const std::string& name, bool enabled) {
  stack_ = composer::SetEnabled(std::move(stack_), name, enabled);
}

void Episode::RemoveModule(const std::string& name) {
  stack_ = composer::RemoveModule(std::move(stack_), name);
  std::erase_if(events_, [&](const ModuleEvent& e) { return e.name == name; });
  next_event_ = 0;
  while (next_event_ < events_.size() &&
         events_[next_event_].time <= world_.step * kDt) {
    ++next_event_;
  }
}

void Episode::AddModule(composer::ModuleSlot slot) {
  stack_ = composer::AddModule(std::move(stack_), std::move(slot));
}

void Episode::ApplySchedule() {
  const double t = world_.step * kDt;
  while (next_event_ < events_.size() && events_[next_event_].time <= t) {
    const auto& e = events_[next_event_++];
    stack_ = composer::SetEnabled(std::move(stack_), e.name, e.enabled);
  }
}

void Episode::Record() {
  const Pose& p = world_.pose;
  const double height = world_.HeightAboveGround(terrain_);
  poses_.push_back({p.yaw, p.pitch, p.roll, height});
  height_sum_ += height;
  roll_abs_sum_ += std::abs(p.roll);
  heading_abs_sum_ +=
      std::abs(sensors::WrapAngle(observation_.desired_yaw - p.yaw));
  ++samples_;
  double lo = world_.legs[0].tip_body.y, hi = lo;
  for (const auto& leg : world_.legs) {
    lo = std::min(lo, leg.tip_body.y);
    hi = std::max(hi, leg.tip_body.y);
  }
  min_width_ = std::min(min_width_, hi - lo);
  min_clearance_ =
      std::min(min_clearance_, height - robot_.body_half_thickness);
  if (world_.step > 0) {
    for (int l = 0; l < kLegs; ++l) {
      tips_[l].push_back({world_.legs[l].tip_speed, world_.legs[l].stance});
    }
  }
}

void Episode::Step(const StepCallback& on_step) {
  if (done()) return;
  ApplySchedule();
  const auto& channels = pipeline_.Update(observation_);
  std::vector<composer::Gate> gates;
  gates.reserve(stack_.slots.size());
  for (const auto& slot : stack_.slots) {
    if (slot.enabled) gates.push_back(pipeline_.Resolve(slot.gate_source));
  }
  const auto acts =
      composer::LegActivationsAt(model_->table, world_.step, stack_);
  const composer::JointMatrix motor =
      composer::MotorOutput(stack_, acts, gates);

  StepRecord record;
  if (on_step) {
    record.step = world_.step;
    record.time = world_.step * kDt;
    record.gates = channels;
    record.distance = observation_.distance;
    record.motor = motor;
    for (const auto& slot : stack_.slots) {
      StepRecord::Contribution c;
      c.name = slot.name();
      c.enabled = slot.enabled;
      if (slot.enabled) {
        c.gate = pipeline_.Resolve(slot.gate_source);
        c.values = composer::ModuleContribution(stack_, acts, gates, c.name);
      }
      record.contributions.push_back(std::move(c));
    }
  }

  world_ = StepWorld(world_, motor, terrain_, robot_);
  observation_ = Observe(world_, terrain_, options_.sensor, robot_);
  Record();

  if (on_step) {
    record.pose = world_.pose;
    record.height = world_.HeightAboveGround(terrain_);
    record.contacts = world_.ContactCount();
    record.fallen = world_.fallen;
    on_step(record);
  }
}

void Episode::Run(const StepCallback& on_step) {
  while (!done()) Step(on_step);
}

rewards::EpisodeStats Episode::Stats() const {
  rewards::EpisodeStats s;
  const Pose& p = world_.pose;
  s.distance = (p.x - start_.x) * std::cos(start_.yaw) +
               (p.y - start_.y) * std::sin(start_.yaw);
  s.instability = rewards::Instability(poses_);
  const double n = static_cast<double>(samples_);
  s.height_error = std::abs(height_sum_ / n - options_.desired_height);
  s.slippage = rewards::Slippage(tips_);
  s.tilt_mean = roll_abs_sum_ / n;
  double roll_mean = 0.0;
  for (const auto& q : poses_) roll_mean += q.roll;
  roll_mean /= n;
  double roll_var = 0.0;
  for (const auto& q : poses_) {
    roll_var += (q.roll - roll_mean) * (q.roll - roll_mean);
  }
  s.tilt_var = roll_var / n;
  s.heading_error = heading_abs_sum_ / n;
  s.min_width = min_width_;
  s.min_height = std::max(0.0, min_clearance_);
  s.ascent = world_.HeightAboveGround(terrain_) + terrain_.HeightAt(p.x, p.y) -
             (start_height_ + terrain_.HeightAt(start_.x, start_.y));
  return s;
}

EpisodeResult RunEpisode(const ControllerModel& model,
                         const composer::ControllerStack& stack,
                         const TerrainSpec& terrain,
                         const EpisodeOptions& options,
                         const StepCallback& on_step) {
  Episode episode(model, stack, terrain, options);
  episode.Run(on_step);
  EpisodeResult result;
  result.stats = episode.Stats();
  result.steps = episode.step_count();
  result.fallen = episode.world().fallen;
  result.fall_reason = episode.world().fall_reason;
  return result;
}

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> JointColumns(const std::string& prefix) {
  std::vector<std::string> cols;
  for (int l = 0; l < kLegs; ++l) {
    for (int j = 0; j < kJoints; ++j) {
      cols.push_back(prefix + composer::LegName(l) + "_J" + std::to_string(j));
    }
  }
  return cols;
}

void AppendJoints(std::string& row, const composer::JointMatrix& m) {
  for (int l = 0; l < kLegs; ++l) {
    for (int j = 0; j < kJoints; ++j) {
      row += ',';
      row += Num(m[l][j]);
    }
  }
}

}  // namespace

std::vector<std::string> StepLogColumns() {
  std::vector<std::string> cols = {
      "step",       "time",          "x",
      "y",          "z",             "yaw",
      "pitch",      "roll",          "height",
      "contacts",   "fallen",        "distance",
      "S_obstacle", "S_tilt_left",   "S_tilt_right",
      "S_heading_left", "S_heading_right"};
  for (auto& c : JointColumns("M_")) cols.push_back(std::move(c));
  return cols;
}

std::string StepLogRow(const StepRecord& r) {
  std::string row = std::to_string(r.step);
  for (double v : {r.time, r.pose.x, r.pose.y, r.pose.z, r.pose.yaw,
                   r.pose.pitch, r.pose.roll, r.height}) {
    row += ',';
    row += Num(v);
  }
  row += ',' + std::to_string(r.contacts);
  row += r.fallen ? ",1," : ",0,";
  if (r.distance) row += Num(*r.distance);
  for (double v : {r.gates.obstacle, r.gates.tilt.left, r.gates.tilt.right,
                   r.gates.heading.left, r.gates.heading.right}) {
    row += ',';
    row += Num(v);
  }
  AppendJoints(row, r.motor);
  return row;
}

std::vector<std::string> ContributionColumns() {
  std::vector<std::string> cols = {"step",      "time",      "module",
                                   "enabled",   "gate_left", "gate_right"};
  for (auto& c : JointColumns("C_")) cols.push_back(std::move(c));
  return cols;
}

std::vector<std::string> ContributionRows(const StepRecord& r) {
  std::vector<std::string> rows;
  for (const auto& c : r.contributions) {
    std::string row = std::to_string(r.step) + ',' + Num(r.time) + ',' +
                      c.name + (c.enabled ? ",1," : ",0,") +
                      Num(c.gate.left) + ',' + Num(c.gate.right);
    AppendJoints(row, c.values);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace modcpg::sim
