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

#include "modcpg/weight_io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "modcpg/error.h"

namespace modcpg::weight_io {

using composer::kJoints;
using composer::kLegs;
using nlohmann::json;

std::string Serialize(const composer::ModuleSlot& slot) {
  const auto& set = slot.weight_set;
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["name"] = set.name;
  doc["H"] = set.hidden_count;
  doc["joints"] = kJoints;
  doc["gate_source"] = slot.gate_source;
  json routing = json::array();
  for (const auto& leg : slot.routing) routing.push_back(leg);
  doc["routing"] = routing;
  doc["weights"] = set.weights;
  return doc.dump(2) + "\n";
}

composer::ModuleSlot Parse(const std::string& text,
                           std::optional<int> expected_hidden) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("weight file: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "weight file format_version " + std::to_string(version) +
                      ", expected " + std::to_string(kFormatVersion));
    }
    composer::ModuleSlot slot;
    slot.weight_set.name = doc.at("name").get<std::string>();
    slot.weight_set.hidden_count = doc.at("H").get<int>();
    const int joints = doc.at("joints").get<int>();
    if (joints != kJoints) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "weight file has " + std::to_string(joints) +
                      " joints, expected " + std::to_string(kJoints));
    }
    if (expected_hidden && slot.weight_set.hidden_count != *expected_hidden) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "weight file has H=" +
                      std::to_string(slot.weight_set.hidden_count) +
                      ", expected H=" + std::to_string(*expected_hidden));
    }
    slot.weight_set.weights = doc.at("weights").get<std::vector<double>>();
    if (static_cast<int>(slot.weight_set.weights.size()) !=
        slot.weight_set.parameter_count()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "weight file lists " +
                      std::to_string(slot.weight_set.weights.size()) +
                      " weights for H=" +
                      std::to_string(slot.weight_set.hidden_count));
    }
    for (double w : slot.weight_set.weights) {
      if (!std::isfinite(w)) {
        throw Error(ErrorCode::kNonFinite, "weight file has non-finite weight");
      }
    }
    slot.gate_source = doc.at("gate_source").get<std::string>();
    const auto& routing = doc.at("routing");
    if (!routing.is_array() || routing.size() != kLegs) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "routing must list 6 legs of 3 joints");
    }
    for (int l = 0; l < kLegs; ++l) {
      const auto row = routing[l].get<std::vector<int>>();
      if (row.size() != kJoints) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "routing must list 6 legs of 3 joints");
      }
      for (int j = 0; j < kJoints; ++j) {
        if (row[j] < -1 || row[j] > 1) {
          throw Error(ErrorCode::kParse, "routing entries must be -1, 0 or 1");
        }
        slot.routing[l][j] = row[j];
      }
    }
    return slot;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("weight file: ") + e.what());
  }
}

void Save(const composer::ModuleSlot& slot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << Serialize(slot);
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

composer::ModuleSlot Load(const std::filesystem::path& path,
                          std::optional<int> expected_hidden) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), expected_hidden);
}

composer::ModuleSlot BaseSlot(composer::WeightSet set) {
  composer::ModuleSlot slot;
  slot.weight_set = std::move(set);
  slot.gate_source = "none";
  slot.routing = composer::FullRouting();
  return slot;
}

}  // namespace modcpg::weight_io
