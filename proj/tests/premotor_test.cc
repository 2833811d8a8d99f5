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

#include <cmath>

#include "doctest.h"
#include "modcpg/cpg.h"
#include "modcpg/error.h"
#include "modcpg/premotor.h"

namespace modcpg::premotor {
namespace {

std::vector<cpg::Sample> Ramp(int n) {
  std::vector<cpg::Sample> v(n);
  for (int i = 0; i < n; ++i) v[i] = {i * 1e-3, -i * 1e-3};
  return v;
}

TEST_CASE("mean indices") {
  // round(h * T / (H - 1)), T clamped to T - 1
  CHECK(MeanIndex(0, 20, 200) == 0);
  CHECK(MeanIndex(1, 20, 200) == 11);  // 10.53
  CHECK(MeanIndex(2, 20, 200) == 21);  // 21.05
  CHECK(MeanIndex(9, 20, 200) == 95);  // 94.74
  CHECK(MeanIndex(18, 20, 200) == 189);
  CHECK(MeanIndex(19, 20, 200) == 199);
  for (int h = 1; h < 20; ++h) CHECK(MeanIndex(h, 20, 200) > MeanIndex(h - 1, 20, 200));
}

TEST_CASE("two neurons sit on the period endpoints") {
  const auto p = Ramp(50);
  const auto layer = PlaceMeans(p, {2, 0.04});
  REQUIRE(layer.hidden_count() == 2);
  CHECK(layer.means[0] == p.front());
  CHECK(layer.means[1] == p.back());
}

TEST_CASE("placement is deterministic") {
  const auto p = cpg::DefaultPeriod();
  const auto a = PlaceMeans(p, {});
  const auto b = PlaceMeans(p, {});
  CHECK(a.means == b.means);
}

TEST_CASE("bad parameters") {
  const auto p = Ramp(10);
  CHECK_THROWS_AS(PlaceMeans(p, {11, 0.04}), Error);
  CHECK_THROWS_AS(PlaceMeans(p, {1, 0.04}), Error);
  CHECK_THROWS_AS(PlaceMeans(p, {5, 0.0}), Error);
  CHECK_THROWS_AS(PlaceMeans({}, {2, 0.04}), Error);
  CHECK_NOTHROW(PlaceMeans(p, {10, 0.04}));
}

TEST_CASE("gaussian activation") {
  PremotorLayer layer{{{0.5, 0.0}, {-0.5, 0.0}}, {2, 0.04}};
  auto a = Activations(layer, 0.5, 0.0);
  CHECK(a[0] == 1.0);
  a = Activations(layer, 0.5, 0.2);  // d^2 = 0.04
  CHECK(a[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(a[0] == doctest::Approx(0.3679).epsilon(1e-4));
  CHECK(a[1] > 0.0);
  CHECK(a[1] < 1e-10);
}

TEST_CASE("one period sweep over the default layer") {
  const auto period = cpg::DefaultPeriod();
  const int T = static_cast<int>(period.size());
  const auto layer = PlaceMeans(period, {});
  const int H = layer.hidden_count();
  REQUIRE(H == 20);
  const ActivationTable table(layer, period);

  std::vector<int> argmax(H, -1);
  std::vector<double> peak(H, -1.0);
  std::vector<std::vector<double>> trace(H, std::vector<double>(T));
  double worst_jump = 0.0;
  for (int t = 0; t < T; ++t) {
    const auto row = table.Row(t);
    double best = 0.0;
    for (int h = 0; h < H; ++h) {
      REQUIRE(row[h] > 0.0);
      REQUIRE(row[h] <= 1.0);
      trace[h][t] = row[h];
      best = std::max(best, row[h]);
      if (row[h] > peak[h]) {
        peak[h] = row[h];
        argmax[h] = t;
      }
      if (t > 0) worst_jump = std::max(worst_jump, std::abs(row[h] - table.Row(t - 1)[h]));
    }
    CHECK(best >= 0.5);
  }
  CHECK(worst_jump <= 0.2);
  for (int h = 0; h < H; ++h) {
    CHECK(peak[h] >= 0.99);
    if (h > 0) CHECK(argmax[h] > argmax[h - 1]);
    // Exactly one local maximum around the (cyclic) period.
    int maxima = 0;
    for (int t = 0; t < T; ++t) {
      const double prev = trace[h][(t + T - 1) % T];
      const double next = trace[h][(t + 1) % T];
      if (trace[h][t] > prev && trace[h][t] >= next) ++maxima;
    }
    CHECK(maxima == 1);
  }
}

TEST_CASE("table rows wrap around the period") {
  const auto period = cpg::DefaultPeriod();
  const auto layer = PlaceMeans(period, {});
  const ActivationTable table(layer, period);
  const long T = table.period();
  for (long t : {0L, 7L, 150L}) {
    const auto a = table.Row(t);
    const auto b = table.Row(t + 3 * T);
    for (int h = 0; h < table.hidden_count(); ++h) CHECK(a[h] == b[h]);
  }
  const auto direct = Activations(layer, period[42].o0, period[42].o1);
  const auto row = table.Row(42);
  for (int h = 0; h < table.hidden_count(); ++h) CHECK(row[h] == direct[h]);
}

}  // namespace
}  // namespace modcpg::premotor
