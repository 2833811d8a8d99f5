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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "modcpg/composer.h"
#include "modcpg/episode.h"
#include "modcpg/error.h"
#include "modcpg/experiment.h"
#include "modcpg/modcpg.h"
#include "modcpg/weight_io.h"

struct modcpg_weightset {
  modcpg::composer::ModuleSlot slot;
};

struct modcpg_controller {
  const modcpg::sim::ControllerModel* model;
  modcpg::composer::ControllerStack stack;
};

namespace {

using modcpg::Error;
using modcpg::ErrorCode;
namespace composer = modcpg::composer;
namespace experiment = modcpg::experiment;

thread_local std::string last_error;

modcpg_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return MODCPG_ERR_INVALID_ARGUMENT;
    case ErrorCode::kNonConvergence: return MODCPG_ERR_NON_CONVERGENCE;
    case ErrorCode::kDuplicateName: return MODCPG_ERR_DUPLICATE_NAME;
    case ErrorCode::kUnknownName: return MODCPG_ERR_UNKNOWN_NAME;
    case ErrorCode::kDimensionMismatch: return MODCPG_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kVersionMismatch: return MODCPG_ERR_VERSION_MISMATCH;
    case ErrorCode::kParse: return MODCPG_ERR_PARSE;
    case ErrorCode::kIo: return MODCPG_ERR_IO;
    case ErrorCode::kNonFinite: return MODCPG_ERR_NON_FINITE;
    case ErrorCode::kConfig: return MODCPG_ERR_CONFIG;
    case ErrorCode::kRuntime: return MODCPG_ERR_RUNTIME;
  }
  return MODCPG_ERR_INTERNAL;
}

// Runs fn, translating exceptions into a status and the thread's message.
template <typename Fn>
modcpg_status Guard(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MODCPG_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return StatusOf(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return MODCPG_ERR_PARSE;
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return MODCPG_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MODCPG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MODCPG_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

char* Dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::filesystem::path BaseDir(const char* base_dir) {
  return base_dir && *base_dir ? std::filesystem::path(base_dir)
                               : std::filesystem::current_path();
}

nlohmann::json ParseRequest(const char* text) {
  Require(text != nullptr, "null request");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("request: ") + e.what());
  }
}

std::vector<composer::Gate> ReadGates(const double* gates, size_t count) {
  Require(count % 2 == 0, "gate_count must be even (left, right pairs)");
  Require(count == 0 || gates != nullptr, "null gates");
  std::vector<composer::Gate> out;
  for (size_t i = 0; i < count; i += 2) out.emplace_back(gates[i], gates[i + 1]);
  return out;
}

void WriteMatrix(const composer::JointMatrix& m, double* out) {
  for (int l = 0; l < composer::kLegs; ++l) {
    for (int j = 0; j < composer::kJoints; ++j) {
      out[l * composer::kJoints + j] = m[l][j];
    }
  }
}

}  // namespace

extern "C" {

const char* modcpg_version(void) { return experiment::kVersion; }

const char* modcpg_last_error(void) { return last_error.c_str(); }

const char* modcpg_status_name(modcpg_status status) {
  switch (status) {
    case MODCPG_OK: return "ok";
    case MODCPG_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MODCPG_ERR_NON_CONVERGENCE: return "non_convergence";
    case MODCPG_ERR_DUPLICATE_NAME: return "duplicate_name";
    case MODCPG_ERR_UNKNOWN_NAME: return "unknown_name";
    case MODCPG_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case MODCPG_ERR_VERSION_MISMATCH: return "version_mismatch";
    case MODCPG_ERR_PARSE: return "parse";
    case MODCPG_ERR_IO: return "io";
    case MODCPG_ERR_NON_FINITE: return "non_finite";
    case MODCPG_ERR_CONFIG: return "config";
    case MODCPG_ERR_RUNTIME: return "runtime";
    case MODCPG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int modcpg_exit_code(modcpg_status status) {
  switch (status) {
    case MODCPG_OK:
      return 0;
    case MODCPG_ERR_NON_CONVERGENCE:
    case MODCPG_ERR_NON_FINITE:
    case MODCPG_ERR_RUNTIME:
    case MODCPG_ERR_INTERNAL:
      return 2;
    default:
      return 1;
  }
}

modcpg_status modcpg_weightset_create(const char* name, int hidden,
                                      const char* gate_source,
                                      modcpg_weightset** out) {
  return Guard([&] {
    Require(name && *name && out, "null argument");
    Require(hidden >= 2, "hidden must be >= 2");
    const std::string gate = gate_source ? gate_source : "none";
    if (!modcpg::sensors::IsKnownGateSource(gate)) {
      throw Error(ErrorCode::kUnknownName, "unknown gate source '" + gate + "'");
    }
    auto* set = new modcpg_weightset;
    set->slot.weight_set = composer::WeightSet::Zeros(name, hidden);
    set->slot.gate_source = gate;
    set->slot.routing = composer::FullRouting();
    *out = set;
  });
}

modcpg_status modcpg_weightset_load(const char* path, modcpg_weightset** out) {
  return Guard([&] {
    Require(path && out, "null argument");
    auto slot = modcpg::weight_io::Load(path);
    *out = new modcpg_weightset{std::move(slot)};
  });
}

modcpg_status modcpg_weightset_save(const modcpg_weightset* set,
                                    const char* path) {
  return Guard([&] {
    Require(set && path, "null argument");
    modcpg::weight_io::Save(set->slot, path);
  });
}

modcpg_status modcpg_weightset_get(const modcpg_weightset* set, double* out,
                                   size_t count) {
  return Guard([&] {
    Require(set && out, "null argument");
    const auto& w = set->slot.weight_set.weights;
    if (count != w.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected " + std::to_string(w.size()) + " values");
    }
    std::copy(w.begin(), w.end(), out);
  });
}

modcpg_status modcpg_weightset_set(modcpg_weightset* set, const double* values,
                                   size_t count) {
  return Guard([&] {
    Require(set && values, "null argument");
    auto& w = set->slot.weight_set.weights;
    if (count != w.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "expected " + std::to_string(w.size()) + " values");
    }
    std::copy(values, values + count, w.begin());
  });
}

modcpg_status modcpg_weightset_set_routing(modcpg_weightset* set,
                                           const int* mask) {
  return Guard([&] {
    Require(set && mask, "null argument");
    for (int i = 0; i < MODCPG_OUTPUTS; ++i) {
      Require(mask[i] >= -1 && mask[i] <= 1, "routing entries must be -1, 0, 1");
    }
    for (int l = 0; l < composer::kLegs; ++l) {
      for (int j = 0; j < composer::kJoints; ++j) {
        set->slot.routing[l][j] = mask[l * composer::kJoints + j];
      }
    }
  });
}

const char* modcpg_weightset_name(const modcpg_weightset* set) {
  return set ? set->slot.name().c_str() : "";
}

int modcpg_weightset_hidden(const modcpg_weightset* set) {
  return set ? set->slot.weight_set.hidden_count : 0;
}

void modcpg_weightset_destroy(modcpg_weightset* set) { delete set; }

modcpg_status modcpg_controller_create(const modcpg_weightset* base,
                                       modcpg_controller** out) {
  return Guard([&] {
    Require(base && out, "null argument");
    const auto& model = modcpg::sim::DefaultControllerModel();
    if (base->slot.weight_set.hidden_count != model.layer.hidden_count()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "base H does not match the premotor layer");
    }
    *out = new modcpg_controller{
        &model,
        composer::MakeStack(base->slot.weight_set, model.period_length())};
  });
}

int modcpg_controller_period(const modcpg_controller* ctl) {
  return ctl ? ctl->model->period_length() : 0;
}

modcpg_status modcpg_controller_add(modcpg_controller* ctl,
                                    const modcpg_weightset* module) {
  return Guard([&] {
    Require(ctl && module, "null argument");
    ctl->stack = composer::AddModule(ctl->stack, module->slot);
  });
}

modcpg_status modcpg_controller_remove(modcpg_controller* ctl,
                                       const char* name) {
  return Guard([&] {
    Require(ctl && name, "null argument");
    ctl->stack = composer::RemoveModule(ctl->stack, name);
  });
}

modcpg_status modcpg_controller_set_enabled(modcpg_controller* ctl,
                                            const char* name, int enabled) {
  return Guard([&] {
    Require(ctl && name, "null argument");
    ctl->stack = composer::SetEnabled(ctl->stack, name, enabled != 0);
  });
}

modcpg_status modcpg_controller_motor_output(const modcpg_controller* ctl,
                                             long step, const double* gates,
                                             size_t gate_count, double* out) {
  return Guard([&] {
    Require(ctl && out, "null argument");
    Require(step >= 0, "step must be >= 0");
    const auto g = ReadGates(gates, gate_count);
    const auto acts =
        composer::LegActivationsAt(ctl->model->table, step, ctl->stack);
    WriteMatrix(composer::MotorOutput(ctl->stack, acts, g), out);
  });
}

modcpg_status modcpg_controller_module_contribution(
    const modcpg_controller* ctl, long step, const double* gates,
    size_t gate_count, const char* name, double* out) {
  return Guard([&] {
    Require(ctl && name && out, "null argument");
    Require(step >= 0, "step must be >= 0");
    const auto g = ReadGates(gates, gate_count);
    const auto acts =
        composer::LegActivationsAt(ctl->model->table, step, ctl->stack);
    WriteMatrix(composer::ModuleContribution(ctl->stack, acts, g, name), out);
  });
}

void modcpg_controller_destroy(modcpg_controller* ctl) { delete ctl; }

modcpg_status modcpg_learn(const char* config_json, const char* base_dir,
                           char** out_json) {
  return Guard([&] {
    Require(out_json != nullptr, "null out_json");
    *out_json = nullptr;
    const auto config =
        experiment::ParseConfig(ParseRequest(config_json), BaseDir(base_dir));
    *out_json = Dup(experiment::Learn(config).dump(2));
  });
}

modcpg_status modcpg_evaluate(const char* request_json, const char* base_dir,
                              char** out_json) {
  return Guard([&] {
    Require(out_json != nullptr, "null out_json");
    *out_json = nullptr;
    const auto request = experiment::ParseEvaluateRequest(
        ParseRequest(request_json), BaseDir(base_dir));
    *out_json = Dup(experiment::Evaluate(request).dump(2));
  });
}

modcpg_status modcpg_bench_pibb(const char* request_json, char** out_json) {
  return Guard([&] {
    Require(out_json != nullptr, "null out_json");
    *out_json = nullptr;
    const auto request = experiment::ParseBenchRequest(
        ParseRequest(request_json ? request_json : "{}"));
    *out_json = Dup(experiment::BenchPibb(request).dump(2));
  });
}

modcpg_status modcpg_inspect(const char* path, char** out_json) {
  return Guard([&] {
    Require(path && out_json, "null argument");
    *out_json = nullptr;
    *out_json = Dup(experiment::Inspect(path).dump(2));
  });
}

void modcpg_free_string(char* s) { std::free(s); }

}  // extern "C"
