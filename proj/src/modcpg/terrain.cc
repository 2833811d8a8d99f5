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

#include "modcpg/terrain.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "modcpg/error.h"

namespace modcpg::sim {

using nlohmann::json;

bool Box::ContainsXY(double x, double y) const {
  return std::abs(x - center.x) <= 0.5 * size.x &&
         std::abs(y - center.y) <= 0.5 * size.y;
}

double TerrainSpec::HeightAt(double x, double y) const {
  double h = 0.0;
  for (const auto& b : boxes) {
    if (b.ContainsXY(x, y)) h = std::max(h, b.top());
  }
  return h;
}

double TerrainSpec::FrictionAt(double x, double y) const {
  double h = 0.0;
  double mu = ground_friction;
  for (const auto& b : boxes) {
    if (b.ContainsXY(x, y) && b.top() > h) {
      h = b.top();
      mu = b.friction;
    }
  }
  return mu;
}

std::optional<double> TerrainSpec::Raycast(const Vec3& origin, const Vec3& dir,
                                           double max_range) const {
  double best = std::numeric_limits<double>::infinity();
  if (dir.z < 0.0) best = -origin.z / dir.z;
  for (const auto& b : boxes) {
    // Slab test.
    double t0 = 0.0;
    double t1 = best;
    const double o[3] = {origin.x, origin.y, origin.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    const double c[3] = {b.center.x, b.center.y, b.center.z};
    const double s[3] = {b.size.x, b.size.y, b.size.z};
    bool hit = true;
    for (int a = 0; a < 3 && hit; ++a) {
      const double lo = c[a] - 0.5 * s[a];
      const double hi = c[a] + 0.5 * s[a];
      if (std::abs(d[a]) < 1e-15) {
        if (o[a] < lo || o[a] > hi) hit = false;
        continue;
      }
      double ta = (lo - o[a]) / d[a];
      double tb = (hi - o[a]) / d[a];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) hit = false;
    }
    if (hit && t0 < best) best = t0;
  }
  if (best >= 0.0 && best <= max_range) return best;
  return std::nullopt;
}

double TerrainSpec::DesiredYaw(double time, double x, double y,
                               double fallback) const {
  const Waypoint* active = nullptr;
  for (const auto& w : waypoints) {
    if (w.time <= time) active = &w;
  }
  if (!active) return fallback;
  return std::atan2(active->y - y, active->x - x);
}

void Validate(const TerrainSpec& terrain) {
  for (const auto& b : terrain.boxes) {
    if (!(b.size.x > 0.0 && b.size.y > 0.0 && b.size.z > 0.0)) {
      throw Error(ErrorCode::kConfig, "scene box with non-positive size");
    }
    if (!(b.friction >= 0.0 && b.friction <= 1.0)) {
      throw Error(ErrorCode::kConfig, "box friction must lie in [0, 1]");
    }
  }
  if (!(terrain.ground_friction >= 0.0 && terrain.ground_friction <= 1.0)) {
    throw Error(ErrorCode::kConfig, "ground friction must lie in [0, 1]");
  }
  if (!(terrain.duration > 0.0)) {
    throw Error(ErrorCode::kConfig, "scene duration must be positive");
  }
}

namespace {

Vec3 ReadVec3(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw Error(ErrorCode::kParse, "expected [x, y, z]");
  return {v[0], v[1], v[2]};
}

std::vector<ModuleEvent> ReadEvents(const json& j) {
  std::vector<ModuleEvent> events;
  for (const auto& e : j) {
    events.push_back({e.at("time").get<double>(),
                      e.at("name").get<std::string>(),
                      e.at("enabled").get<bool>()});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const ModuleEvent& a, const ModuleEvent& b) {
                     return a.time < b.time;
                   });
  return events;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TerrainSpec ParseScene(const std::string& text) {
  TerrainSpec t;
  try {
    const json doc = json::parse(text);
    for (const auto& b : doc.value("boxes", json::array())) {
      t.boxes.push_back({ReadVec3(b.at("center")), ReadVec3(b.at("size")),
                         b.value("friction", 1.0)});
    }
    t.ground_friction = doc.value("ground_friction", 1.0);
    for (const auto& w : doc.value("waypoints", json::array())) {
      t.waypoints.push_back({w.at("time").get<double>(),
                             w.at("x").get<double>(), w.at("y").get<double>()});
    }
    std::stable_sort(t.waypoints.begin(), t.waypoints.end(),
                     [](const Waypoint& a, const Waypoint& b) {
                       return a.time < b.time;
                     });
    t.modules = ReadEvents(doc.value("modules", json::array()));
    if (doc.contains("start")) {
      const auto& s = doc["start"];
      t.start = {s.value("x", 0.0), s.value("y", 0.0), s.value("yaw", 0.0)};
    }
    t.duration = doc.value("duration", 6.0);
    t.seed = doc.value("seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("scene: ") + e.what());
  }
  Validate(t);
  return t;
}

TerrainSpec LoadScene(const std::filesystem::path& path) {
  return ParseScene(ReadFile(path));
}

std::vector<ModuleEvent> LoadSchedule(const std::filesystem::path& path) {
  try {
    const json doc = json::parse(ReadFile(path));
    const json& list = doc.is_array() ? doc : doc.at("modules");
    return ReadEvents(list);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("schedule: ") + e.what());
  }
}

std::string SerializeScene(const TerrainSpec& t) {
  json doc;
  json boxes = json::array();
  for (const auto& b : t.boxes) {
    boxes.push_back({{"center", {b.center.x, b.center.y, b.center.z}},
                     {"size", {b.size.x, b.size.y, b.size.z}},
                     {"friction", b.friction}});
  }
  doc["boxes"] = boxes;
  doc["ground_friction"] = t.ground_friction;
  json waypoints = json::array();
  for (const auto& w : t.waypoints) {
    waypoints.push_back({{"time", w.time}, {"x", w.x}, {"y", w.y}});
  }
  doc["waypoints"] = waypoints;
  json modules = json::array();
  for (const auto& m : t.modules) {
    modules.push_back(
        {{"time", m.time}, {"name", m.name}, {"enabled", m.enabled}});
  }
  doc["modules"] = modules;
  doc["start"] = {{"x", t.start.x}, {"y", t.start.y}, {"yaw", t.start.yaw}};
  doc["duration"] = t.duration;
  doc["seed"] = t.seed;
  return doc.dump(2) + "\n";
}

}  // namespace modcpg::sim
