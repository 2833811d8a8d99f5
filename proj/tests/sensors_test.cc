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
#include <numbers>

#include "doctest.h"
#include "modcpg/sensors.h"

namespace modcpg::sensors {
namespace {

constexpr double kPi = std::numbers::pi;

TEST_CASE("constant input approaches the input monotonically") {
  for (int stages : {1, 3}) {
    IirChain chain(stages, 0.1);
    double prev = 0.0;
    for (int t = 0; t < 500; ++t) {
      const double y = chain.Step(1.0);
      CHECK(y >= prev);
      CHECK(y <= 1.0);
      prev = y;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));
    for (double s : chain.state()) CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("zero in, zero out") {
  IirChain chain(3, 0.1);
  for (int t = 0; t < 100; ++t) CHECK(chain.Step(0.0) == 0.0);
}

TEST_CASE("stage update") {
  IirChain chain(1, 0.25);
  CHECK(chain.Step(1.0) == 0.25);
  CHECK(chain.Step(1.0) == 0.75 * 0.25 + 0.25);
}

TEST_CASE("three stages hold a pulse longer than one") {
  IirChain one(1, 0.1), three(3, 0.1);
  std::vector<double> a, b;
  for (int t = 0; t < 200; ++t) {
    a.push_back(one.Step(t == 0 ? 1.0 : 0.0));
    b.push_back(three.Step(t == 0 ? 1.0 : 0.0));
  }
  const auto pa = std::max_element(a.begin(), a.end()) - a.begin();
  const auto pb = std::max_element(b.begin(), b.end()) - b.begin();
  // Relative to each chain's own peak, 10 steps later.
  CHECK(b[pb + 10] / b[pb] > a[pa + 10] / a[pa]);
}

TEST_CASE("obstacle gate") {
  ObstacleSensorConfig cfg;
  SUBCASE("close reading drives the gate toward one") {
    IirChain chain(kObstacleStages, kObstacleCoefficient);
    double s = 0.0;
    for (int t = 0; t < 300; ++t) s = ObstacleGate(cfg, 0.05, chain);
    CHECK(s > 0.99);
  }
  SUBCASE("far or missing readings keep it at zero") {
    IirChain chain(kObstacleStages, kObstacleCoefficient);
    for (int t = 0; t < 100; ++t) {
      CHECK(ObstacleGate(cfg, 0.30, chain) == 0.0);
      CHECK(ObstacleGate(cfg, std::nullopt, chain) == 0.0);
      CHECK(ObstacleGate(cfg, cfg.cutoff_distance, chain) == 0.0);
    }
  }
  SUBCASE("five-step stimulus is remembered") {
    IirChain chain(kObstacleStages, kObstacleCoefficient);
    for (int t = 0; t < 5; ++t) ObstacleGate(cfg, 0.05, chain);
    int positive = 0;
    for (int t = 0; t < 200; ++t) {
      if (ObstacleGate(cfg, std::nullopt, chain) > 0.0) ++positive;
    }
    CHECK(positive > 5);
  }
  SUBCASE("memory spans at least twice the stimulus") {
    // The chain keeps rising after offset, so count every later step above
    // 0.05. Holds for stimuli of 2..28 steps; longer ones saturate.
    for (int duration = 2; duration <= 28; ++duration) {
      IirChain chain(kObstacleStages, kObstacleCoefficient);
      for (int t = 0; t < duration; ++t) ObstacleGate(cfg, 0.05, chain);
      int above = 0;
      for (int t = 0; t < 400; ++t) {
        if (ObstacleGate(cfg, std::nullopt, chain) > 0.05) ++above;
      }
      CAPTURE(duration);
      CHECK(above >= 2 * duration);
    }
  }
}

TEST_CASE("tilt gate splits by sign") {
  IirChain chain(1, kTiltCoefficient);
  auto g = TiltGate(0.0, chain);
  CHECK(g.left == 0.0);
  CHECK(g.right == 0.0);
  for (int t = 0; t < 300; ++t) g = TiltGate(0.1, chain);
  CHECK(g.left == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(g.right == 0.0);
  for (int t = 0; t < 300; ++t) {
    g = TiltGate(-0.1, chain);
    CHECK(g.left >= 0.0);
    CHECK(g.right >= 0.0);
    CHECK((g.left == 0.0 || g.right == 0.0));
  }
  CHECK(g.right == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("tilt filter attenuates fast alternation") {
  IirChain chain(1, kTiltCoefficient);
  double worst = 0.0;
  for (int t = 0; t < 400; ++t) {
    const auto g = TiltGate(t % 2 ? 0.1 : -0.1, chain);
    if (t > 50) worst = std::max({worst, g.left, g.right});
  }
  CHECK(worst < 0.02);
}

TEST_CASE("heading gate") {
  IirChain chain(1, kHeadingCoefficient);
  auto g = HeadingGate(0.4, 0.4, chain);
  CHECK(g.left == 0.0);
  CHECK(g.right == 0.0);
  for (int t = 0; t < 300; ++t) g = HeadingGate(0.0, kPi / 4, chain);
  CHECK(g.left == doctest::Approx(kPi / 4).epsilon(1e-9));
  CHECK(g.right == 0.0);

  IirChain fresh(1, kHeadingCoefficient);
  const double deg = kPi / 180.0;
  g = HeadingGate(-179 * deg, 179 * deg, fresh);
  CHECK(g.left == 0.0);
  CHECK(g.right == doctest::Approx(kHeadingCoefficient * 2 * deg).epsilon(1e-9));
}

TEST_CASE("angle wrapping") {
  CHECK(WrapAngle(kPi) == doctest::Approx(kPi));
  CHECK(WrapAngle(-kPi) == doctest::Approx(kPi));
  CHECK(WrapAngle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(WrapAngle(0.3) == 0.3);
  for (double a = -20.0; a < 20.0; a += 0.173) {
    const double w = WrapAngle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::remainder(a - w, 2 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("pipeline resolves gate sources") {
  SensorPipeline p;
  Observation obs;
  obs.distance = 0.05;
  obs.roll = -0.2;
  obs.yaw = 0.0;
  obs.desired_yaw = 0.3;
  for (int t = 0; t < 400; ++t) p.Update(obs);
  CHECK(p.Resolve("obstacle").left == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p.Resolve("obstacle").right == p.Resolve("obstacle").left);
  CHECK(p.Resolve("tilt").left == 0.0);
  CHECK(p.Resolve("tilt").right == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(p.Resolve("heading").left == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(p.Resolve("command").left == 1.0);
  CHECK(p.Resolve("none").right == 0.0);
  CHECK_THROWS(p.Resolve("sonar"));
  CHECK(IsKnownGateSource("tilt"));
  CHECK_FALSE(IsKnownGateSource("sonar"));
}

}  // namespace
}  // namespace modcpg::sensors
