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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Scratch output goes under $TMPDIR/modcpg_acceptance unless
// a directory is given as the first argument.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "modcpg/composer.h"
#include "modcpg/cpg.h"
#include "modcpg/episode.h"
#include "modcpg/experiment.h"
#include "modcpg/pibb.h"
#include "modcpg/premotor.h"
#include "modcpg/rewards.h"
#include "modcpg/weight_io.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace modcpg;

const fs::path kSource = MODCPG_SOURCE_DIR;
fs::path g_root;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path Fresh(const std::string& name) {
  const fs::path p = g_root / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string Read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> Tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "timing.json") continue;
    files[fs::relative(e.path(), root).string()] = Read(e.path());
  }
  return files;
}

// 1. Oscillation frequency from positive zero crossings after the transient.
Outcome CpgFrequency() {
  const auto state = cpg::Advance(cpg::MakeState({}), cpg::kTransientSteps);
  const auto crossings = cpg::PositiveZeroCrossings(state, 6000);
  if (crossings.size() < 2) return {false, "no oscillation"};
  const double period = (crossings.back() - crossings.front()) /
                        static_cast<double>(crossings.size() - 1);
  const double hz = 60.0 / period;
  return {std::abs(hz - 0.30) <= 0.015,
          Fmt("%.4f Hz over %.0f cycles (0.30 +- 5%%)", hz,
              crossings.size() - 1.0)};
}

// 2. Each RBF neuron peaks once per period, >= 0.99, in order of h.
Outcome RbfPlacement() {
  const auto period = cpg::DefaultPeriod();
  const auto layer = premotor::PlaceMeans(period, {20, 0.04});
  const premotor::ActivationTable table(layer, period);
  const int T = table.period();
  int bad = 0;
  int prev_peak = -1;
  double min_peak = 1.0;
  for (int h = 0; h < 20; ++h) {
    int maxima = 0;
    int argmax = 0;
    double best = -1.0;
    for (int t = 0; t < T; ++t) {
      const double v = table.Row(t)[h];
      const double l = table.Row(t + T - 1)[h];
      const double r = table.Row(t + 1)[h];
      if (v > l && v >= r) ++maxima;
      if (v > best) best = v, argmax = t;
    }
    min_peak = std::min(min_peak, best);
    if (maxima != 1 || best < 0.99 || argmax <= prev_peak) ++bad;
    prev_peak = argmax;
  }
  return {bad == 0, Fmt("%.0f neurons off, min peak %.6f, T = %.0f", bad,
                        min_peak, T)};
}

// 3. Composition algebra on random stacks.
Outcome Composition() {
  const auto period = cpg::DefaultPeriod();
  const auto layer = premotor::PlaceMeans(period, {});
  const premotor::ActivationTable table(layer, period);
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> tri(-1, 1), count(0, 5);
  const auto random_set = [&](const std::string& name) {
    auto w = composer::WeightSet::Zeros(name, 20);
    for (double& v : w.weights) v = u(rng);
    return w;
  };
  double worst_sum = 0.0, worst_disable = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto stack = composer::MakeStack(random_set("base"), table.period());
    const int n = count(rng);
    for (int m = 0; m < n; ++m) {
      composer::ModuleSlot s{random_set("m" + std::to_string(m)), "command",
                             {}, true};
      for (auto& leg : s.routing) {
        for (int& r : leg) r = tri(rng);
      }
      stack = composer::AddModule(stack, s);
    }
    const long step = std::uniform_int_distribution<long>(0, 100000)(rng);
    const auto acts = composer::LegActivationsAt(table, step, stack);
    std::vector<composer::Gate> gates;
    for (int m = 0; m < n; ++m) gates.emplace_back(u(rng), u(rng));
    const auto out = composer::MotorOutput(stack, acts, gates);
    auto sum = composer::BaseContribution(stack, acts);
    std::vector<composer::JointMatrix> parts;
    for (int m = 0; m < n; ++m) {
      parts.push_back(composer::ModuleContribution(stack, acts, gates,
                                                   stack.slots[m].name()));
      for (int l = 0; l < 6; ++l) {
        for (int j = 0; j < 3; ++j) sum[l][j] += parts[m][l][j];
      }
    }
    for (int l = 0; l < 6; ++l) {
      for (int j = 0; j < 3; ++j) {
        worst_sum = std::max(worst_sum, std::abs(out[l][j] - sum[l][j]));
      }
    }
    for (int m = 0; m < n; ++m) {
      const auto off = composer::SetEnabled(stack, stack.slots[m].name(), false);
      auto g = gates;
      g.erase(g.begin() + m);
      const auto reduced = composer::MotorOutput(off, acts, g);
      for (int l = 0; l < 6; ++l) {
        for (int j = 0; j < 3; ++j) {
          worst_disable = std::max(
              worst_disable,
              std::abs(out[l][j] - reduced[l][j] - parts[m][l][j]));
        }
      }
    }
  }
  return {worst_sum <= 1e-12 && worst_disable <= 1e-12,
          Fmt("max |sum error| %.3g, max |disable error| %.3g", worst_sum,
              worst_disable)};
}

// 4. PI^BB probability weighting.
Outcome PibbCorrectness() {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 100.0);
  double simplex = 0.0, scale = 0.0;
  int negative = 0;
  bool uniform = true;
  for (int trial = 0; trial < 500; ++trial) {
    const int K = 2 + trial % 15;
    std::vector<pibb::RolloutRecord> a(K);
    for (auto& r : a) r.reward = n(rng) * 5.0;
    auto b = a;
    const double c = pos(rng), shift = n(rng) * 10.0;
    for (auto& r : b) r.reward = c * r.reward + shift;
    pibb::WeightRollouts(a, 10.0);
    pibb::WeightRollouts(b, 10.0);
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      total += a[k].probability;
      if (a[k].probability < 0.0) ++negative;
      scale = std::max(scale, std::abs(a[k].probability - b[k].probability));
    }
    simplex = std::max(simplex, std::abs(total - 1.0));
    std::vector<pibb::RolloutRecord> eq(K);
    const double v = n(rng);
    for (auto& r : eq) r.reward = v;
    pibb::WeightRollouts(eq, 10.0);
    for (const auto& r : eq) uniform &= r.probability == 1.0 / K;
  }
  std::vector<pibb::RolloutRecord> two(2);
  two[0].reward = 0.0;
  two[1].reward = 1.0;
  pibb::WeightRollouts(two, 10.0);
  const double e10 = std::exp(10.0);
  const double k2 = std::max(std::abs(two[0].probability - 1.0 / (1.0 + e10)),
                             std::abs(two[1].probability - e10 / (1.0 + e10)));
  const bool pass = simplex <= 1e-12 && negative == 0 && scale <= 1e-12 &&
                    uniform && k2 <= 1e-12;
  return {pass, Fmt("simplex %.2g, affine %.2g, K=2 %.2g, equal-returns ",
                    simplex, scale, k2) +
                    (uniform ? "uniform" : "NOT uniform")};
}

// 5. Sphere benchmark.
Outcome PibbConvergence() {
  const auto r = experiment::BenchPibb({});
  return {r["pass"].get<bool>(),
          Fmt("median final/initial distance %.4f over 5 seeds (<= 0.1)",
              r["median_ratio"].get<double>())};
}

// 6. Reward weight tables and edge cases.
Outcome RewardCoefficients() {
  using rewards::Behavior;
  // d, gamma, xi, slip, tau_mu, tau_sigma, delta, lambda_y, lambda_z, d_z
  const std::map<Behavior, std::array<double, 10>> table = {
      {Behavior::kBase, {3, 1, 3, 0.75, 0, 0, 0, 0, 0, 0}},
      {Behavior::kObstacle, {0.5, 1, 0, 0.5, 0, 0, 0, 0, 0, 0}},
      {Behavior::kPosture, {2, 1, 0, 0.5, 40, 10, 0, 0, 0, 0}},
      {Behavior::kDirection, {0.1, 1, 3, 1, 0, 0, 6, 0, 0, 0}},
      {Behavior::kHigh, {3, 10, 0, 1, 0, 0, 0, -2, -15, 0}},
      {Behavior::kLow, {3, 10, 0, 1, 0, 0, 0, -2, 60, 0}},
      {Behavior::kNarrow, {3, 10, 0, 1, 0, 0, 0, 60, -15, 0}},
      {Behavior::kPipe, {5, 1, 0, 0.75, 0, 0, 0, 0, 0, 0}},
      {Behavior::kWall, {0.6, 1, 0, 0.75, 0, 0, 0, 0, 0, -6}},
  };
  int mismatches = 0;
  for (const auto& [b, w] : table) {
    const double r0 = rewards::Return(b, {});
    for (int i = 0; i < rewards::kStatCount; ++i) {
      std::array<double, rewards::kStatCount> unit{};
      unit[i] = 1.0;
      const double got = rewards::Return(b, rewards::FromArray(unit)) - r0;
      const double want = i == 0 ? w[0] : -w[i];
      if (got != want) ++mismatches;
    }
  }
  std::vector<std::vector<rewards::TipSample>> slipping = {
      {{0.5, true}, {0.2, true}}, {{0.0, true}}};
  const double slip = rewards::Slippage(slipping);
  std::vector<rewards::PoseSample> wild;
  for (int i = 0; i < 50; ++i) wild.push_back({i * 1.0, -i * 1.0, i * 2.0, 0});
  const double cap = rewards::Instability(wild);
  return {mismatches == 0 && slip == 1.0 && cap == 8.0,
          Fmt("%.0f of 90 coefficients differ, slippage %.3g, cap %.3g",
              mismatches, slip, cap)};
}

std::vector<std::vector<std::string>> Csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(Read(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    rows.push_back(std::move(f));
  }
  return rows;
}

// 7. Base learning curve shape.
Outcome BaseLearning() {
  auto doc = json::parse(Read(kSource / "configs/base.json"));
  doc["output"] = (Fresh("c7") / "base").string();
  const auto c = experiment::ParseConfig(doc, kSource / "configs");
  experiment::Learn(c);
  const auto rows = Csv(c.output / "reward_trace.csv");
  const auto& head = rows.front();
  const auto col =
      std::find(head.begin(), head.end(), "mean") - head.begin();
  std::vector<double> mean;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    mean.push_back(std::stod(rows[i][col]));
  }
  if (mean.size() != 100) return {false, "trace length mismatch"};
  double first = 0.0, last = 0.0;
  for (int i = 0; i < 5; ++i) first += mean[i] / 5.0;
  for (int i = 90; i < 100; ++i) last += mean[i] / 10.0;
  // Relative to |first| so a negative starting return still counts.
  const double gain = (last - first) / std::abs(first);
  std::vector<double> ma(100, 0.0);
  for (int i = 9; i < 100; ++i) {
    for (int j = i - 9; j <= i; ++j) ma[i] += mean[j] / 10.0;
  }
  int violations = 0;
  for (int i = 31; i < 100; ++i) {
    if (ma[i] < ma[i - 1]) ++violations;
  }
  return {gain >= 0.5 && violations <= 2,
          Fmt("first-5 mean %.3f, last-10 mean %.3f, gain %.0f%%, "
              "%.0f moving-average drops after iteration 30",
              first, last, gain * 100.0, violations)};
}

// 8. Obstacle module on a frozen base, then online disable vs removal.
Outcome StagingAndRemoval() {
  const fs::path dir = Fresh("c8");
  fs::copy_file(kSource / "data/reference_base.json", dir / "base.json");
  const auto before = experiment::FileChecksum(dir / "base.json");
  auto doc = json::parse(Read(kSource / "configs/obstacle.json"));
  doc["frozen"] = {(dir / "base.json").string()};
  doc["output"] = (dir / "obstacle").string();
  const auto c = experiment::ParseConfig(doc, kSource / "configs");
  experiment::Learn(c);
  const bool unchanged = experiment::FileChecksum(dir / "base.json") == before;

  const auto& model = sim::DefaultControllerModel();
  auto stack = composer::MakeStack(
      weight_io::Load(dir / "base.json", 20).weight_set, model.period_length());
  stack = composer::AddModule(
      stack, weight_io::Load(dir / "obstacle/seed_1/weights.json", 20));
  const auto scene = sim::LoadScene(kSource / "scenes/obstacle.json");
  sim::EpisodeOptions opt;
  opt.duration = scene.duration;
  opt.seed = scene.seed;
  sim::Episode ep(model, stack, scene, opt);
  const long fork_step = 600;  // 10 s
  double active = 0.0;
  while (ep.step_count() < fork_step && !ep.done()) {
    ep.Step([&](const sim::StepRecord& r) {
      for (const auto& row : r.contributions[0].values) {
        for (double v : row) active = std::max(active, std::abs(v));
      }
    });
  }
  sim::Episode disabled = ep;
  sim::Episode removed = ep;
  disabled.SetEnabled("obstacle", false);
  removed.RemoveModule("obstacle");
  long compared = 0, differing = 0;
  double leak = 0.0;
  while (!disabled.done() || !removed.done()) {
    sim::StepRecord a, b;
    disabled.Step([&](const sim::StepRecord& r) { a = r; });
    removed.Step([&](const sim::StepRecord& r) { b = r; });
    ++compared;
    if (sim::StepLogRow(a) != sim::StepLogRow(b)) ++differing;
    for (const auto& row : a.contributions[0].values) {
      for (double v : row) leak = std::max(leak, std::abs(v));
    }
  }
  const bool pass = unchanged && differing == 0 && leak == 0.0 &&
                    compared > 0 && active > 0.0;
  return {pass,
          std::string(unchanged ? "base checksum unchanged" : "BASE CHANGED") +
              Fmt(", %.0f post-disable steps, %.0f differ, module peak "
                  "%.3g before / %.3g after",
                  compared, differing, active, leak)};
}

// 9. Learn and evaluate are byte-reproducible, also across thread counts.
Outcome Determinism() {
  const fs::path dir = Fresh("c9");
  experiment::ExperimentConfig c;
  c.scene = kSource / "scenes/flat.json";
  c.iterations = 10;
  c.seeds = {1, 2};
  std::vector<std::map<std::string, std::string>> trees;
  for (int run = 0; run < 3; ++run) {
    c.output = dir / ("learn_" + std::to_string(run));
    c.threads = run == 1 ? 4 : 1;
    experiment::Learn(c);
    trees.push_back(Tree(c.output));
  }
  const bool learn_same = trees[0] == trees[1] && trees[0] == trees[2];

  std::vector<std::map<std::string, std::string>> evals;
  for (int run = 0; run < 2; ++run) {
    experiment::EvaluateRequest r;
    r.scene = kSource / "scenes/course.json";
    r.weights = {dir / "learn_0/seed_1/weights.json"};
    r.output = dir / ("eval_" + std::to_string(run));
    experiment::Evaluate(r);
    evals.push_back(Tree(r.output));
  }
  const bool eval_same = evals[0] == evals[1];
  return {learn_same && eval_same,
          Fmt("learn: %.0f files, threads 1/4/1 ", trees[0].size()) +
              (learn_same ? "identical" : "DIFFER") +
              Fmt("; evaluate: %.0f files, repeat ", evals[0].size()) +
              (eval_same ? "identical" : "DIFFERS")};
}

// 10. Simulated time in the manifest.
Outcome Bookkeeping() {
  experiment::ExperimentConfig c;
  c.iterations = 20;
  c.rollouts = 8;
  c.duration = 6.0;
  c.output = Fresh("c10");
  experiment::Learn(c);
  const auto m = json::parse(Read(c.output / "manifest.json"));
  const double s = m["simulated_time"]["per_seed_seconds"].get<double>();
  const double min = m["simulated_time"]["minutes"].get<double>();
  return {s == 960.0 && min == 16.0,
          Fmt("20 x 8 x 6 s = %.0f s = %.0f min", s, min)};
}

}  // namespace

int main(int argc, char** argv) {
  g_root = argc > 1 ? fs::path(argv[1])
                    : fs::temp_directory_path() / "modcpg_acceptance";
  fs::create_directories(g_root);
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "CPG frequency", 1, CpgFrequency},
      {2, "RBF placement", 1, RbfPlacement},
      {3, "composition algebra", 10, Composition},
      {4, "PI^BB correctness", 5, PibbCorrectness},
      {5, "PI^BB sphere convergence", 30, PibbConvergence},
      {6, "reward coefficients", 1, RewardCoefficients},
      {7, "base learning curve", 600, BaseLearning},
      {8, "module staging and removal", 60, StagingAndRemoval},
      {9, "determinism", 120, Determinism},
      {10, "simulated-time bookkeeping", 1, Bookkeeping},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_time = s <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %2d %s: %s -- %s [%.2f s of %.0f s%s]\n", c.id,
                pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), s,
                c.budget_s, in_time ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
