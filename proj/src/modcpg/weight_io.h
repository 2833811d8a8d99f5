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

#ifndef MODCPG_WEIGHT_IO_H_
#define MODCPG_WEIGHT_IO_H_

#include <filesystem>
#include <optional>
#include <string>

#include "modcpg/composer.h"

namespace modcpg::weight_io {

inline constexpr int kFormatVersion = 1;

// Weight files carry a whole slot description: the H x 3 weights plus the
// gate source and per-leg routing. The base set uses gate source "none".
std::string Serialize(const composer::ModuleSlot& slot);
composer::ModuleSlot Parse(const std::string& text,
                           std::optional<int> expected_hidden = std::nullopt);

void Save(const composer::ModuleSlot& slot, const std::filesystem::path& path);
composer::ModuleSlot Load(const std::filesystem::path& path,
                          std::optional<int> expected_hidden = std::nullopt);

// Wraps a base weight set as a slot (gate "none", full routing).
composer::ModuleSlot BaseSlot(composer::WeightSet set);

}  // namespace modcpg::weight_io

#endif  // MODCPG_WEIGHT_IO_H_
