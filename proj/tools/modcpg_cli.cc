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

// Command-line front end over the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modcpg/modcpg.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Absolute(const std::string& p) {
  return fs::absolute(p).lexically_normal().string();
}

int Fail(modcpg_status status) {
  std::cerr << "error (" << modcpg_status_name(status)
            << "): " << modcpg_last_error() << "\n";
  return modcpg_exit_code(status);
}

int Emit(modcpg_status status, char* out) {
  if (status != MODCPG_OK) return Fail(status);
  std::cout << out << "\n";
  modcpg_free_string(out);
  return 0;
}

template <typename T>
void Set(json& doc, const char* key, const std::optional<T>& v) {
  if (v) doc[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modular CPG controller: learning, evaluation, benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", modcpg_version());

  // learn
  auto* learn = app.add_subcommand("learn", "Run staged PI^BB learning");
  std::string config_path;
  std::optional<std::string> l_behavior, l_scene, l_init, l_output, l_module;
  std::optional<int> l_iterations, l_rollouts, l_threads;
  std::optional<double> l_sigma, l_decay, l_lambda, l_duration;
  std::vector<std::uint64_t> l_seeds;
  std::vector<std::string> l_frozen;
  learn->add_option("--config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  learn->add_option("--behavior", l_behavior, "Behavior to learn");
  learn->add_option("--scene", l_scene, "Scene file");
  learn->add_option("--iterations", l_iterations, "Iteration budget");
  learn->add_option("--seeds", l_seeds, "Seeds (space separated)");
  learn->add_option("--rollouts", l_rollouts, "Rollouts per iteration (K)");
  learn->add_option("--sigma", l_sigma, "Initial exploration std");
  learn->add_option("--decay", l_decay, "Variance decay per iteration");
  learn->add_option("--lambda", l_lambda, "Reward weighting sharpness");
  learn->add_option("--duration", l_duration, "Rollout duration (s)");
  learn->add_option("--frozen", l_frozen, "Frozen weight files, base first");
  learn->add_option("--init-weights", l_init, "Initial weights file");
  learn->add_option("--module-name", l_module, "Name of the learned module");
  learn->add_option("--output", l_output, "Output directory");
  learn->add_option("--threads", l_threads, "Parallel rollouts");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Run one logged episode");
  std::optional<std::string> e_scene, e_schedule, e_behavior;
  std::string e_output = "runs/eval";
  std::vector<std::string> e_weights;
  std::optional<std::uint64_t> e_seed;
  std::optional<double> e_duration, e_noise;
  evaluate->add_option("--scene", e_scene, "Scene file (flat when omitted)");
  evaluate->add_option("--weights", e_weights, "Weight files, base first")
      ->required();
  evaluate->add_option("--schedule", e_schedule, "Module enable schedule");
  evaluate->add_option("--output", e_output, "Output directory");
  evaluate->add_option("--seed", e_seed, "Episode seed");
  evaluate->add_option("--duration", e_duration, "Episode duration (s)");
  evaluate->add_option("--behavior", e_behavior, "Report this return only");
  evaluate->add_option("--com-noise", e_noise, "CoM offset std (m)");

  // bench-pibb
  auto* bench = app.add_subcommand("bench-pibb", "PI^BB sphere benchmark");
  std::optional<int> b_dims, b_iters, b_seeds, b_rollouts, b_threads;
  std::optional<double> b_sigma, b_decay, b_lambda, b_offset;
  bool b_require = false;
  bench->add_option("--dimensions", b_dims, "Parameter count");
  bench->add_option("--iterations", b_iters, "Iterations");
  bench->add_option("--seeds", b_seeds, "Number of seeds");
  bench->add_option("--rollouts", b_rollouts, "Rollouts per iteration");
  bench->add_option("--sigma", b_sigma, "Exploration std");
  bench->add_option("--decay", b_decay, "Variance decay");
  bench->add_option("--lambda", b_lambda, "Weighting sharpness");
  bench->add_option("--offset", b_offset, "Per-coordinate optimum offset");
  bench->add_option("--threads", b_threads, "Parallel rollouts");
  bench->add_flag("--require-pass", b_require,
                  "Exit 2 unless the median ratio is <= 0.1");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Summarize a weight file");
  std::string i_weights;
  inspect->add_option("--weights", i_weights, "Weight file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*learn) {
    std::ifstream in(config_path);
    std::stringstream text;
    text << in.rdbuf();
    json doc;
    try {
      doc = json::parse(text.str());
    } catch (const json::exception& e) {
      std::cerr << "error (config): " << config_path << ": " << e.what()
                << "\n";
      return 1;
    }
    if (!doc.is_object()) {
      std::cerr << "error (config): " << config_path << " is not an object\n";
      return 1;
    }
    Set(doc, "behavior", l_behavior);
    if (l_scene) doc["scene"] = Absolute(*l_scene);
    Set(doc, "iterations", l_iterations);
    if (!l_seeds.empty()) doc["seeds"] = l_seeds;
    if (l_rollouts || l_sigma || l_decay || l_lambda) {
      json& p = doc["pibb"];
      if (p.is_null()) p = json::object();
      Set(p, "rollouts", l_rollouts);
      Set(p, "sigma", l_sigma);
      Set(p, "decay", l_decay);
      Set(p, "lambda", l_lambda);
    }
    Set(doc, "duration", l_duration);
    if (!l_frozen.empty()) {
      json frozen = json::array();
      for (const auto& f : l_frozen) frozen.push_back(Absolute(f));
      doc["frozen"] = frozen;
    }
    if (l_init) doc["init_weights"] = Absolute(*l_init);
    Set(doc, "module_name", l_module);
    // An explicit --output is taken relative to the run root like the config
    // value, so the two spellings behave the same.
    Set(doc, "output", l_output);
    Set(doc, "threads", l_threads);

    const std::string base_dir =
        fs::absolute(config_path).parent_path().string();
    char* out = nullptr;
    const auto status = modcpg_learn(doc.dump().c_str(), base_dir.c_str(), &out);
    return Emit(status, out);
  }

  if (*evaluate) {
    json doc = json::object();
    if (e_scene) doc["scene"] = Absolute(*e_scene);
    json weights = json::array();
    for (const auto& w : e_weights) weights.push_back(Absolute(w));
    doc["weights"] = weights;
    if (e_schedule) doc["schedule"] = Absolute(*e_schedule);
    doc["output"] = e_output;
    Set(doc, "seed", e_seed);
    Set(doc, "duration", e_duration);
    Set(doc, "behavior", e_behavior);
    Set(doc, "com_noise_std", e_noise);
    char* out = nullptr;
    const auto status = modcpg_evaluate(doc.dump().c_str(), nullptr, &out);
    return Emit(status, out);
  }

  if (*bench) {
    json doc = json::object();
    Set(doc, "dimensions", b_dims);
    Set(doc, "iterations", b_iters);
    Set(doc, "seeds", b_seeds);
    Set(doc, "rollouts", b_rollouts);
    Set(doc, "sigma", b_sigma);
    Set(doc, "decay", b_decay);
    Set(doc, "lambda", b_lambda);
    Set(doc, "offset", b_offset);
    Set(doc, "threads", b_threads);
    char* out = nullptr;
    const auto status = modcpg_bench_pibb(doc.dump().c_str(), &out);
    if (status != MODCPG_OK) return Fail(status);
    const bool pass = json::parse(out).value("pass", false);
    std::cout << out << "\n";
    modcpg_free_string(out);
    return b_require && !pass ? 2 : 0;
  }

  if (*inspect) {
    char* out = nullptr;
    const auto status = modcpg_inspect(i_weights.c_str(), &out);
    return Emit(status, out);
  }
  return 0;
}
