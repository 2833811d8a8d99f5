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
#include "modcpg/error.h"
#include "modcpg/rewards.h"

namespace modcpg::rewards {
namespace {

std::vector<TipSample> Leg(int contacts, int slips, int airborne = 0) {
  std::vector<TipSample> v;
  for (int i = 0; i < contacts; ++i) v.push_back({i < slips ? 0.5 : 0.0, true});
  for (int i = 0; i < airborne; ++i) v.push_back({1.0, false});
  return v;
}

TEST_CASE("slippage") {
  SUBCASE("no contact") {
    std::vector<std::vector<TipSample>> legs = {Leg(0, 0, 10), Leg(0, 0, 3)};
    CHECK(Slippage(legs) == 0.0);
  }
  SUBCASE("one leg slipping every contact") {
    std::vector<std::vector<TipSample>> legs = {Leg(10, 0), Leg(7, 7, 4)};
    CHECK(Slippage(legs) == 1.0);
  }
  SUBCASE("worst leg wins") {
    std::vector<std::vector<TipSample>> legs = {Leg(10, 3), Leg(10, 1)};
    CHECK(Slippage(legs) == doctest::Approx(0.3));
  }
  SUBCASE("threshold is strict") {
    std::vector<std::vector<TipSample>> legs = {{{kSlipSpeedThreshold, true}}};
    CHECK(Slippage(legs) == 0.0);
  }
}

TEST_CASE("instability") {
  std::vector<PoseSample> constant(20, {0.1, 0.2, 0.3, 0.1});
  CHECK(Instability(constant) == 0.0);
  std::vector<PoseSample> yaw;
  for (int i = 0; i < 20; ++i) yaw.push_back({i % 2 ? 1.0 : -1.0, 0.0, 0.0, 0.1});
  CHECK(Instability(yaw) == doctest::Approx(1.0));
  std::vector<PoseSample> wild;
  for (int i = 0; i < 20; ++i) wild.push_back({i * 10.0, -i * 10.0, 0.0, 0.0});
  CHECK(Instability(wild) == 8.0);
  std::vector<PoseSample> bad = {{0, 0, 0, 0}, {std::nan(""), 0, 0, 0}};
  CHECK(Instability(bad) == 8.0);
}

TEST_CASE("zero stats give zero returns") {
  for (Behavior b : kAllBehaviors) CHECK(Return(b, {}) == 0.0);
}

TEST_CASE("worked examples") {
  EpisodeStats s;
  s.distance = 1.0;
  CHECK(Return(Behavior::kBase, s) == 3.0);
  EpisodeStats w;
  w.ascent = 1.0;
  CHECK(Return(Behavior::kWall, w) == 6.0);
}

// Finite differences on unit stats vectors recover the coefficient table.
TEST_CASE("coefficient recovery") {
  struct Row {
    Behavior b;
    std::array<double, kStatCount> expected;  // as +d, -penalties
  };
  // d, gamma, xi, slip, tau_mu, tau_sigma, delta, lambda_y, lambda_z, d_z
  const Row rows[] = {
      {Behavior::kBase, {3, -1, -3, -0.75, 0, 0, 0, 0, 0, 0}},
      {Behavior::kObstacle, {0.5, -1, 0, -0.5, 0, 0, 0, 0, 0, 0}},
      {Behavior::kPosture, {2, -1, 0, -0.5, -40, -10, 0, 0, 0, 0}},
      {Behavior::kDirection, {0.1, -1, -3, -1, 0, 0, -6, 0, 0, 0}},
      {Behavior::kHigh, {3, -10, 0, -1, 0, 0, 0, 2, 15, 0}},
      {Behavior::kLow, {3, -10, 0, -1, 0, 0, 0, 2, -60, 0}},
      {Behavior::kNarrow, {3, -10, 0, -1, 0, 0, 0, -60, 15, 0}},
      {Behavior::kPipe, {5, -1, 0, -0.75, 0, 0, 0, 0, 0, 0}},
      {Behavior::kWall, {0.6, -1, 0, -0.75, 0, 0, 0, 0, 0, 6}},
  };
  for (const auto& row : rows) {
    CAPTURE(BehaviorName(row.b));
    const double r0 = Return(row.b, {});
    for (int i = 0; i < kStatCount; ++i) {
      std::array<double, kStatCount> unit{};
      unit[i] = 1.0;
      CAPTURE(kStatNames[i]);
      CHECK(Return(row.b, FromArray(unit)) - r0 == row.expected[i]);
    }
  }
}

TEST_CASE("weights table") {
  const auto& high = WeightsFor(Behavior::kHigh);
  CHECK(high.min_width == -2.0);
  CHECK(high.min_height == -15.0);
  CHECK(WeightsFor(Behavior::kLow).min_height == 60.0);
  CHECK(WeightsFor(Behavior::kNarrow).min_width == 60.0);
  CHECK(WeightsFor(Behavior::kPipe).min_width == 0.0);
  CHECK(WeightsFor(Behavior::kWall).ascent == -6.0);
}

TEST_CASE("base return is monotone") {
  EpisodeStats s{0.5, 0.1, 0.02, 0.3};
  const double r = Return(Behavior::kBase, s);
  auto more = s;
  more.distance += 0.01;
  CHECK(Return(Behavior::kBase, more) > r);
  for (double EpisodeStats::*f : {&EpisodeStats::instability, &EpisodeStats::height_error,
                                  &EpisodeStats::slippage}) {
    auto worse = s;
    worse.*f += 0.01;
    CHECK(Return(Behavior::kBase, worse) < r);
  }
}

TEST_CASE("cap bounds the instability penalty") {
  EpisodeStats s;
  s.instability = kInstabilityCap;
  for (Behavior b : kAllBehaviors) {
    CHECK(Return(b, s) >= -kInstabilityCap * WeightsFor(b).instability);
  }
}

TEST_CASE("non-finite stats are rejected") {
  EpisodeStats s;
  s.slippage = std::nan("");
  try {
    Return(Behavior::kBase, s);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonFinite);
  }
}

TEST_CASE("names") {
  for (Behavior b : kAllBehaviors) CHECK(ParseBehavior(BehaviorName(b)) == b);
  CHECK_FALSE(ParseBehavior("swim").has_value());
  CHECK(IsAdvanced(Behavior::kHigh));
  CHECK(IsAdvanced(Behavior::kWall));
  CHECK_FALSE(IsAdvanced(Behavior::kPosture));
  const auto a = ToArray(FromArray({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
  for (int i = 0; i < kStatCount; ++i) CHECK(a[i] == i + 1);
}

}  // namespace
}  // namespace modcpg::rewards
