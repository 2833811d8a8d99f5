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

#include "modcpg/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>

#include "modcpg/composer.h"
#include "modcpg/episode.h"
#include "modcpg/error.h"
#include "modcpg/terrain.h"
#include "modcpg/weight_io.h"

namespace modcpg::experiment {

namespace fs = std::filesystem;
using nlohmann::json;
using rewards::Behavior;

double DefaultSigma(Behavior behavior) {
  switch (behavior) {
    case Behavior::kBase:
    case Behavior::kObstacle:
    case Behavior::kDirection:
      return 0.02;
    case Behavior::kPosture:
      return 0.1;
    default:
      return 0.06;
  }
}

double DefaultDuration(Behavior behavior) {
  switch (behavior) {
    case Behavior::kObstacle:
    case Behavior::kPipe:
      return 14.0;
    case Behavior::kDirection:
      return 10.0;
    case Behavior::kWall:
      return 12.0;
    default:
      return 6.0;
  }
}

std::string DefaultGateSource(Behavior behavior) {
  switch (behavior) {
    case Behavior::kBase:
      return "none";
    case Behavior::kObstacle:
      return "obstacle";
    case Behavior::kPosture:
      return "tilt";
    case Behavior::kDirection:
      return "heading";
    default:
      return "command";
  }
}

namespace {

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

fs::path ResolveInput(const fs::path& p, const fs::path& base_dir) {
  return (p.is_absolute() ? p : base_dir / p).lexically_normal();
}

fs::path ResolveOutput(const fs::path& p) {
  if (p.is_absolute()) return p;
  const char* root = std::getenv(kRunRootEnv);
  return ((root && *root ? fs::path(root) : fs::current_path()) / p)
      .lexically_normal();
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  auto out = OpenOut(path);
  out << text;
}

void RequireFile(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kConfig,
                std::string(what) + " not found: " + path.string());
  }
}

void CheckKeys(const json& doc, const std::set<std::string>& allowed,
               const char* what) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kConfig, std::string(what) + " must be an object");
  }
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kConfig,
                  std::string("unknown ") + what + " key '" + key + "'");
    }
  }
}

Behavior ReadBehavior(const json& v) {
  const auto name = v.get<std::string>();
  const auto b = rewards::ParseBehavior(name);
  if (!b) throw Error(ErrorCode::kConfig, "unknown behavior '" + name + "'");
  return *b;
}

sim::TerrainSpec SceneOrFlat(const std::optional<fs::path>& scene) {
  if (!scene) return {};
  RequireFile(*scene, "scene");
  return sim::LoadScene(*scene);
}

std::vector<composer::ModuleSlot> LoadSlots(
    const std::vector<fs::path>& paths, int hidden) {
  std::vector<composer::ModuleSlot> slots;
  for (const auto& p : paths) {
    RequireFile(p, "weight file");
    slots.push_back(weight_io::Load(p, hidden));
  }
  return slots;
}

// Base slot first (gate "none"), then modules in order.
composer::ControllerStack BuildStack(
    const std::vector<composer::ModuleSlot>& slots, int period) {
  if (slots.empty()) throw Error(ErrorCode::kConfig, "no base weight set");
  if (slots[0].gate_source != "none") {
    throw Error(ErrorCode::kConfig, "first weight set '" + slots[0].name() +
                                        "' is not a base set (gate '" +
                                        slots[0].gate_source + "')");
  }
  auto stack = composer::MakeStack(slots[0].weight_set, period);
  for (std::size_t i = 1; i < slots.size(); ++i) {
    stack = composer::AddModule(std::move(stack), slots[i]);
  }
  return stack;
}

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

json StatsJson(const rewards::EpisodeStats& stats) {
  json j = json::object();
  const auto values = rewards::ToArray(stats);
  for (int i = 0; i < rewards::kStatCount; ++i) {
    j[rewards::kStatNames[i]] = values[i];
  }
  return j;
}

std::string StatsHeader() {
  std::string h;
  for (const char* name : rewards::kStatNames) {
    h += ',';
    h += name;
  }
  return h;
}

std::string StatsRow(const rewards::EpisodeStats& stats) {
  std::string row;
  for (double v : rewards::ToArray(stats)) {
    row += ',';
    row += Num(v);
  }
  return row;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Runs one episode streaming the step log (and optionally contributions).
sim::EpisodeResult LoggedEpisode(sim::Episode episode, const fs::path& log,
                                 const std::optional<fs::path>& contrib) {
  auto out = OpenOut(log);
  std::ofstream cout_;
  const auto join = [](const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) s += ',';
      s += cols[i];
    }
    return s;
  };
  out << join(sim::StepLogColumns()) << '\n';
  if (contrib) {
    cout_ = OpenOut(*contrib);
    cout_ << join(sim::ContributionColumns()) << '\n';
  }
  episode.Run([&](const sim::StepRecord& r) {
    out << sim::StepLogRow(r) << '\n';
    if (contrib) {
      for (const auto& row : sim::ContributionRows(r)) cout_ << row << '\n';
    }
  });
  sim::EpisodeResult result;
  result.stats = episode.Stats();
  result.steps = episode.step_count();
  result.fallen = episode.world().fallen;
  result.fall_reason = episode.world().fall_reason;
  return result;
}

}  // namespace

std::uint64_t EpisodeSeed(std::uint64_t seed, int iteration, int rollout) {
  std::uint64_t h = Mix(seed);
  h = Mix(h ^ static_cast<std::uint64_t>(iteration));
  return Mix(h ^ (static_cast<std::uint64_t>(rollout) << 32));
}

ExperimentConfig ParseConfig(const json& doc, const fs::path& base_dir) {
  CheckKeys(doc,
            {"behavior", "scene", "iterations", "seeds", "pibb", "duration",
             "frozen", "init_weights", "module_name", "output", "threads",
             "convergence", "desired_height", "com_noise_std"},
            "config");
  ExperimentConfig c;
  try {
    if (!doc.contains("behavior")) {
      throw Error(ErrorCode::kConfig, "config needs a behavior");
    }
    c.behavior = ReadBehavior(doc["behavior"]);
    c.sigma = DefaultSigma(c.behavior);
    c.duration = DefaultDuration(c.behavior);
    c.module_name = rewards::BehaviorName(c.behavior);
    if (doc.contains("scene") && !doc["scene"].is_null()) {
      c.scene = ResolveInput(doc["scene"].get<std::string>(), base_dir);
    }
    c.iterations = doc.value("iterations", c.iterations);
    if (doc.contains("seeds")) {
      c.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    }
    if (doc.contains("pibb")) {
      const auto& p = doc["pibb"];
      CheckKeys(p, {"rollouts", "sigma", "decay", "lambda"}, "pibb");
      c.rollouts = p.value("rollouts", c.rollouts);
      c.sigma = p.value("sigma", c.sigma);
      c.decay = p.value("decay", c.decay);
      c.lambda = p.value("lambda", c.lambda);
    }
    c.duration = doc.value("duration", c.duration);
    for (const auto& f : doc.value("frozen", json::array())) {
      c.frozen.push_back(ResolveInput(f.get<std::string>(), base_dir));
    }
    if (doc.contains("init_weights") && !doc["init_weights"].is_null()) {
      c.init_weights =
          ResolveInput(doc["init_weights"].get<std::string>(), base_dir);
    }
    c.module_name = doc.value("module_name", c.module_name);
    c.output = ResolveOutput(doc.value("output", c.output.string()));
    c.threads = doc.value("threads", c.threads);
    if (doc.contains("convergence") && !doc["convergence"].is_null()) {
      const auto& cv = doc["convergence"];
      CheckKeys(cv, {"window", "threshold"}, "convergence");
      pibb::Convergence conv;
      conv.window = cv.value("window", conv.window);
      conv.threshold = cv.value("threshold", conv.threshold);
      c.convergence = conv;
    }
    c.desired_height = doc.value("desired_height", c.desired_height);
    c.com_noise_std = doc.value("com_noise_std", c.com_noise_std);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config: ") + e.what());
  }

  if (c.seeds.empty()) throw Error(ErrorCode::kConfig, "seeds is empty");
  if (c.iterations < 0) {
    throw Error(ErrorCode::kConfig, "iterations must be >= 0");
  }
  if (!(c.duration > 0.0)) {
    throw Error(ErrorCode::kConfig, "duration must be > 0");
  }
  if (c.threads < 1) throw Error(ErrorCode::kConfig, "threads must be >= 1");
  if (c.module_name.empty()) {
    throw Error(ErrorCode::kConfig, "module_name is empty");
  }
  if (c.convergence && c.convergence->window < 1) {
    throw Error(ErrorCode::kConfig, "convergence window must be >= 1");
  }
  pibb::PibbConfig p;
  p.rollouts = c.rollouts;
  p.exploration_std = c.sigma;
  p.decay = c.decay;
  p.lambda = c.lambda;
  try {
    pibb::Validate(p);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (c.behavior == Behavior::kBase && !c.frozen.empty()) {
    throw Error(ErrorCode::kConfig, "base learning takes no frozen sets");
  }
  if (c.behavior != Behavior::kBase && c.frozen.empty()) {
    throw Error(ErrorCode::kConfig,
                "module learning needs a frozen base weight set");
  }
  return c;
}

json ToJson(const ExperimentConfig& c) {
  json j;
  j["behavior"] = rewards::BehaviorName(c.behavior);
  j["scene"] = c.scene ? json(c.scene->string()) : json(nullptr);
  j["iterations"] = c.iterations;
  j["seeds"] = c.seeds;
  j["pibb"] = {{"rollouts", c.rollouts},
               {"sigma", c.sigma},
               {"decay", c.decay},
               {"lambda", c.lambda}};
  j["duration"] = c.duration;
  json frozen = json::array();
  for (const auto& f : c.frozen) frozen.push_back(f.string());
  j["frozen"] = frozen;
  j["init_weights"] =
      c.init_weights ? json(c.init_weights->string()) : json(nullptr);
  j["module_name"] = c.module_name;
  j["output"] = c.output.string();
  j["threads"] = c.threads;
  j["convergence"] =
      c.convergence ? json{{"window", c.convergence->window},
                           {"threshold", c.convergence->threshold}}
                    : json(nullptr);
  j["desired_height"] = c.desired_height;
  j["com_noise_std"] = c.com_noise_std;
  return j;
}

json Learn(const ExperimentConfig& c) {
  const auto wall_start = std::chrono::steady_clock::now();
  const auto& model = sim::DefaultControllerModel();
  const int hidden = model.layer.hidden_count();
  const int period = model.period_length();
  const sim::TerrainSpec terrain = SceneOrFlat(c.scene);

  std::vector<std::string> frozen_sums;
  for (const auto& f : c.frozen) {
    RequireFile(f, "frozen weight file");
    frozen_sums.push_back(FileChecksum(f));
  }
  const auto frozen_slots = LoadSlots(c.frozen, hidden);

  std::vector<double> init(hidden * composer::kJoints, 0.0);
  if (c.init_weights) {
    RequireFile(*c.init_weights, "initial weight file");
    init = weight_io::Load(*c.init_weights, hidden).weight_set.weights;
  }

  const bool learning_base = c.behavior == Behavior::kBase;
  composer::ModuleSlot learned_template;
  learned_template.weight_set =
      composer::WeightSet::Zeros(c.module_name, hidden);
  learned_template.gate_source = DefaultGateSource(c.behavior);
  learned_template.routing = c.behavior == Behavior::kObstacle
                                 ? composer::FrontLegRouting()
                                 : composer::FullRouting();
  if (learning_base) learned_template = weight_io::BaseSlot(
      learned_template.weight_set);

  const auto make_stack = [&](std::span<const double> params) {
    composer::ModuleSlot slot = learned_template;
    slot.weight_set.weights.assign(params.begin(), params.end());
    if (learning_base) return composer::MakeStack(slot.weight_set, period);
    auto stack = BuildStack(frozen_slots, period);
    return composer::AddModule(std::move(stack), std::move(slot));
  };
  // Catch name clashes and H mismatches before spending any compute.
  make_stack(init);

  sim::EpisodeOptions base_options;
  base_options.duration = c.duration;
  base_options.desired_height = c.desired_height;
  base_options.com_noise_std = c.com_noise_std;

  fs::create_directories(c.output);
  const int k_count = c.rollouts;

  json seeds_json = json::array();
  std::vector<std::vector<pibb::IterationStats>> traces;
  std::vector<std::string> failures;
  double simulated_total = 0.0;

  for (const std::uint64_t seed : c.seeds) {
    const std::string dir_name = "seed_" + std::to_string(seed);
    const fs::path dir = c.output / dir_name;
    fs::create_directories(dir);

    struct Cell {
      rewards::EpisodeStats stats;
      double reward = 0.0;
      long steps = 0;
      bool fallen = false;
    };
    std::vector<Cell> cells(static_cast<std::size_t>(c.iterations) * k_count);

    const pibb::Evaluator evaluator = [&](std::span<const double> params,
                                          int it, int k) {
      sim::EpisodeOptions o = base_options;
      o.seed = EpisodeSeed(seed, it, k);
      const auto r = sim::RunEpisode(model, make_stack(params), terrain, o);
      Cell& cell = cells[static_cast<std::size_t>(it) * k_count + k];
      cell.stats = r.stats;
      cell.steps = r.steps;
      cell.fallen = r.fallen;
      cell.reward = rewards::Return(c.behavior, r.stats);
      return cell.reward;
    };

    pibb::PibbConfig pc;
    pc.rollouts = c.rollouts;
    pc.exploration_std = c.sigma;
    pc.decay = c.decay;
    pc.lambda = c.lambda;
    pc.seed = seed;
    pibb::RunOptions ro;
    ro.iterations = c.iterations;
    ro.convergence = c.convergence;
    ro.threads = c.threads;

    pibb::RunResult result;
    json seed_json = {{"seed", seed}, {"directory", dir_name}};
    try {
      result = pibb::Run(pc, evaluator, init, ro);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNonFinite) throw;
      const std::string msg = "seed " + std::to_string(seed) + ": " + e.what();
      failures.push_back(msg);
      WriteText(dir / "error.txt", msg + "\n");
      seed_json["status"] = "failed";
      seed_json["error"] = msg;
      seeds_json.push_back(seed_json);
      traces.emplace_back();
      continue;
    }
    const int done = static_cast<int>(result.trace.size());

    composer::ModuleSlot learned = learned_template;
    learned.weight_set.weights = result.params;
    weight_io::Save(learned, dir / "weights.json");

    {
      auto out = OpenOut(dir / "trace.csv");
      out << "iteration,mean_return,sd_return,sigma_current\n";
      for (const auto& s : result.trace) {
        out << s.iteration << ',' << Num(s.mean_return) << ','
            << Num(s.sd_return) << ',' << Num(s.sigma) << '\n';
      }
    }
    {
      auto out = OpenOut(dir / "rollouts.csv");
      out << "iteration,rollout,episode_seed,behavior,steps,fallen"
          << StatsHeader() << ",return\n";
      for (int it = 0; it < done; ++it) {
        for (int k = 0; k < k_count; ++k) {
          const Cell& cell = cells[static_cast<std::size_t>(it) * k_count + k];
          out << it << ',' << k << ',' << EpisodeSeed(seed, it, k) << ','
              << rewards::BehaviorName(c.behavior) << ',' << cell.steps << ','
              << (cell.fallen ? 1 : 0) << StatsRow(cell.stats) << ','
              << Num(cell.reward) << '\n';
        }
      }
    }

    // Learned controller replayed once with the run seed as episode seed.
    sim::EpisodeOptions fo = base_options;
    fo.seed = seed;
    const auto final_result = LoggedEpisode(
        sim::Episode(model, make_stack(result.params), terrain, fo),
        dir / "final_episode.csv", std::nullopt);

    const double simulated = done * k_count * c.duration;
    simulated_total += simulated;
    seed_json["status"] = "ok";
    seed_json["iterations_run"] = done;
    seed_json["converged"] = result.converged;
    seed_json["simulated_time_s"] = simulated;
    seed_json["final_return"] =
        done ? result.trace.back().mean_return : std::nan("");
    seed_json["final_episode"] = {
        {"seed", seed},
        {"steps", final_result.steps},
        {"fallen", final_result.fallen},
        {"stats", StatsJson(final_result.stats)},
        {"return", rewards::Return(c.behavior, final_result.stats)}};
    seed_json["weights_checksum"] = FileChecksum(dir / "weights.json");
    seed_json["outputs"] = {dir_name + "/weights.json", dir_name + "/trace.csv",
                            dir_name + "/rollouts.csv",
                            dir_name + "/final_episode.csv"};
    seeds_json.push_back(seed_json);
    traces.push_back(std::move(result.trace));
  }

  {
    auto out = OpenOut(c.output / "reward_trace.csv");
    out << "iteration";
    for (auto s : c.seeds) out << ",seed_" << s;
    out << ",mean,sd\n";
    std::size_t rows = 0;
    for (const auto& t : traces) rows = std::max(rows, t.size());
    for (std::size_t it = 0; it < rows; ++it) {
      out << it;
      std::vector<double> vals;
      for (const auto& t : traces) {
        out << ',';
        if (it < t.size()) {
          out << Num(t[it].mean_return);
          vals.push_back(t[it].mean_return);
        }
      }
      double mean = 0.0;
      for (double v : vals) mean += v;
      mean /= vals.size();
      double var = 0.0;
      for (double v : vals) var += (v - mean) * (v - mean);
      var /= vals.size();
      out << ',' << Num(mean) << ',' << Num(std::sqrt(var)) << '\n';
    }
  }

  json frozen_json = json::array();
  for (std::size_t i = 0; i < c.frozen.size(); ++i) {
    const std::string after = FileChecksum(c.frozen[i]);
    if (after != frozen_sums[i]) {
      throw Error(ErrorCode::kRuntime,
                  "frozen weight file changed: " + c.frozen[i].string());
    }
    frozen_json.push_back(
        {{"path", c.frozen[i].string()}, {"checksum", frozen_sums[i]}});
  }

  // Output location and thread count live in timing.json so that manifests of
  // repeated runs compare byte for byte.
  json config = ToJson(c);
  config.erase("output");
  config.erase("threads");

  json manifest;
  manifest["version"] = kVersion;
  manifest["command"] = "learn";
  manifest["config"] = config;
  manifest["learned_module"] = {{"name", learned_template.name()},
                                {"gate_source", learned_template.gate_source}};
  manifest["frozen"] = frozen_json;
  manifest["seeds"] = seeds_json;
  manifest["simulated_time"] = {
      {"seconds", simulated_total},
      {"minutes", simulated_total / 60.0},
      {"per_seed_seconds",
       c.iterations * k_count * c.duration},
      {"accounting", "iterations x rollouts x duration"}};
  manifest["outputs"] = {"reward_trace.csv", "manifest.json", "timing.json"};
  WriteText(c.output / "manifest.json", manifest.dump(2) + "\n");

  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - wall_start)
                          .count();
  const json timing = {{"wall_clock_s", wall},
                       {"threads", c.threads},
                       {"output", c.output.string()}};
  WriteText(c.output / "timing.json", timing.dump(2) + "\n");

  if (!failures.empty()) {
    std::string msg = "learning aborted for";
    for (const auto& f : failures) msg += "\n  " + f;
    throw Error(ErrorCode::kNonFinite, msg);
  }
  json summary = manifest;
  summary["output"] = c.output.string();
  summary["wall_clock_s"] = wall;
  return summary;
}

EvaluateRequest ParseEvaluateRequest(const json& doc,
                                     const fs::path& base_dir) {
  CheckKeys(doc,
            {"scene", "weights", "schedule", "output", "seed", "duration",
             "behavior", "com_noise_std", "desired_height"},
            "evaluate");
  EvaluateRequest r;
  try {
    if (doc.contains("scene") && !doc["scene"].is_null()) {
      r.scene = ResolveInput(doc["scene"].get<std::string>(), base_dir);
    }
    for (const auto& w : doc.value("weights", json::array())) {
      r.weights.push_back(ResolveInput(w.get<std::string>(), base_dir));
    }
    if (doc.contains("schedule") && !doc["schedule"].is_null()) {
      r.schedule = ResolveInput(doc["schedule"].get<std::string>(), base_dir);
    }
    r.output = ResolveOutput(doc.value("output", r.output.string()));
    if (doc.contains("seed") && !doc["seed"].is_null()) {
      r.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("duration") && !doc["duration"].is_null()) {
      r.duration = doc["duration"].get<double>();
    }
    if (doc.contains("behavior") && !doc["behavior"].is_null()) {
      r.behavior = ReadBehavior(doc["behavior"]);
    }
    r.com_noise_std = doc.value("com_noise_std", r.com_noise_std);
    r.desired_height = doc.value("desired_height", r.desired_height);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("evaluate: ") + e.what());
  }
  if (r.weights.empty()) {
    throw Error(ErrorCode::kConfig, "evaluate needs at least a base weight file");
  }
  if (r.duration && !(*r.duration > 0.0)) {
    throw Error(ErrorCode::kConfig, "duration must be > 0");
  }
  return r;
}

json Evaluate(const EvaluateRequest& r) {
  const auto& model = sim::DefaultControllerModel();
  const sim::TerrainSpec terrain = SceneOrFlat(r.scene);
  const auto stack =
      BuildStack(LoadSlots(r.weights, model.layer.hidden_count()),
                 model.period_length());

  sim::EpisodeOptions o;
  o.seed = r.seed.value_or(terrain.seed);
  o.duration = r.duration.value_or(terrain.duration);
  o.com_noise_std = r.com_noise_std;
  o.desired_height = r.desired_height;
  if (r.schedule) {
    RequireFile(*r.schedule, "schedule");
    o.schedule = sim::LoadSchedule(*r.schedule);
  }
  // Constructing the episode validates the schedule against the stack.
  sim::Episode episode(model, stack, terrain, o);

  fs::create_directories(r.output);
  const auto result =
      LoggedEpisode(std::move(episode), r.output / "episode.csv",
                    r.output / "contributions.csv");

  json returns = json::object();
  if (r.behavior) {
    returns[rewards::BehaviorName(*r.behavior)] =
        rewards::Return(*r.behavior, result.stats);
  } else {
    for (Behavior b : rewards::kAllBehaviors) {
      returns[rewards::BehaviorName(b)] = rewards::Return(b, result.stats);
    }
  }
  json modules = json::array({stack.base.name});
  for (const auto& slot : stack.slots) modules.push_back(slot.name());

  json stats = {{"version", kVersion},
                {"command", "evaluate"},
                {"seed", o.seed},
                {"duration", o.duration},
                {"steps", result.steps},
                {"fallen", result.fallen},
                {"fall_reason", result.fall_reason},
                {"modules", modules},
                {"stats", StatsJson(result.stats)},
                {"returns", returns}};
  WriteText(r.output / "stats.json", stats.dump(2) + "\n");
  stats["output"] = r.output.string();
  return stats;
}

BenchRequest ParseBenchRequest(const json& doc) {
  CheckKeys(doc,
            {"dimensions", "iterations", "seeds", "rollouts", "sigma", "decay",
             "lambda", "offset", "threads"},
            "bench");
  BenchRequest r;
  try {
    r.dimensions = doc.value("dimensions", r.dimensions);
    r.iterations = doc.value("iterations", r.iterations);
    r.seeds = doc.value("seeds", r.seeds);
    r.rollouts = doc.value("rollouts", r.rollouts);
    r.sigma = doc.value("sigma", r.sigma);
    r.decay = doc.value("decay", r.decay);
    r.lambda = doc.value("lambda", r.lambda);
    r.offset = doc.value("offset", r.offset);
    r.threads = doc.value("threads", r.threads);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bench: ") + e.what());
  }
  if (r.dimensions < 1 || r.iterations < 0 || r.seeds < 1 || r.threads < 1) {
    throw Error(ErrorCode::kConfig, "bench sizes out of range");
  }
  return r;
}

json BenchPibb(const BenchRequest& r) {
  std::vector<double> ratios;
  for (int s = 1; s <= r.seeds; ++s) {
    // Optimum at a random corner of the offset cube around the origin.
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    std::bernoulli_distribution coin(0.5);
    std::vector<double> target(r.dimensions);
    for (double& t : target) t = coin(rng) ? r.offset : -r.offset;

    const auto distance = [&](std::span<const double> w) {
      double d2 = 0.0;
      for (int i = 0; i < r.dimensions; ++i) {
        d2 += (w[i] - target[i]) * (w[i] - target[i]);
      }
      return d2;
    };
    pibb::PibbConfig pc;
    pc.rollouts = r.rollouts;
    pc.exploration_std = r.sigma;
    pc.decay = r.decay;
    pc.lambda = r.lambda;
    pc.seed = static_cast<std::uint64_t>(s);
    pibb::RunOptions ro;
    ro.iterations = r.iterations;
    ro.threads = r.threads;
    const std::vector<double> w0(r.dimensions, 0.0);
    const auto result = pibb::Run(
        pc, [&](std::span<const double> w, int, int) { return -distance(w); },
        w0, ro);
    ratios.push_back(std::sqrt(distance(result.params) / distance(w0)));
  }
  const double median = Median(ratios);
  return {{"version", kVersion},
          {"command", "bench-pibb"},
          {"dimensions", r.dimensions},
          {"iterations", r.iterations},
          {"rollouts", r.rollouts},
          {"sigma", r.sigma},
          {"decay", r.decay},
          {"lambda", r.lambda},
          {"offset", r.offset},
          {"ratios", ratios},
          {"median_ratio", median},
          {"pass", median <= 0.1}};
}

json Inspect(const fs::path& path) {
  RequireFile(path, "weight file");
  const auto slot = weight_io::Load(path);
  const auto& w = slot.weight_set;
  double norm = 0.0;
  for (double v : w.weights) norm += v * v;
  json joints = json::array();
  for (int j = 0; j < composer::kJoints; ++j) {
    double lo = w.at(0, j), hi = lo, mean = 0.0;
    for (int h = 0; h < w.hidden_count; ++h) {
      lo = std::min(lo, w.at(h, j));
      hi = std::max(hi, w.at(h, j));
      mean += w.at(h, j);
    }
    joints.push_back({{"joint", "J" + std::to_string(j)},
                      {"min", lo},
                      {"max", hi},
                      {"mean", mean / w.hidden_count}});
  }
  json routing = json::array();
  for (int l = 0; l < composer::kLegs; ++l) {
    routing.push_back({{"leg", composer::LegName(l)},
                       {"mask", slot.routing[l]}});
  }
  return {{"name", w.name},
          {"H", w.hidden_count},
          {"joints", composer::kJoints},
          {"parameter_count", w.parameter_count()},
          {"gate_source", slot.gate_source},
          {"l2_norm", std::sqrt(norm)},
          {"per_joint", joints},
          {"routing", routing},
          {"checksum", FileChecksum(path)}};
}

std::string FileChecksum(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace modcpg::experiment
