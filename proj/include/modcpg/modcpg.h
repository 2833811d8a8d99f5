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

/* C interface to the modcpg controller library.
 *
 * Every call returns a modcpg_status; on failure modcpg_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the caller
 * (release with the matching _destroy). Strings returned through char** are
 * released with modcpg_free_string.
 */
#ifndef MODCPG_MODCPG_H_
#define MODCPG_MODCPG_H_

#include <stddef.h>

#if defined(_WIN32)
#define MODCPG_API __declspec(dllexport)
#else
#define MODCPG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  MODCPG_OK = 0,
  MODCPG_ERR_INVALID_ARGUMENT = 1,
  MODCPG_ERR_NON_CONVERGENCE = 2,
  MODCPG_ERR_DUPLICATE_NAME = 3,
  MODCPG_ERR_UNKNOWN_NAME = 4,
  MODCPG_ERR_DIMENSION_MISMATCH = 5,
  MODCPG_ERR_VERSION_MISMATCH = 6,
  MODCPG_ERR_PARSE = 7,
  MODCPG_ERR_IO = 8,
  MODCPG_ERR_NON_FINITE = 9,
  MODCPG_ERR_CONFIG = 10,
  MODCPG_ERR_RUNTIME = 11,
  MODCPG_ERR_INTERNAL = 12,
} modcpg_status;

#define MODCPG_LEGS 6
#define MODCPG_JOINTS 3
#define MODCPG_OUTPUTS 18 /* legs x joints, leg-major: L1 L2 L3 R1 R2 R3 */

typedef struct modcpg_weightset modcpg_weightset;
typedef struct modcpg_controller modcpg_controller;

MODCPG_API const char* modcpg_version(void);
MODCPG_API const char* modcpg_last_error(void);
MODCPG_API const char* modcpg_status_name(modcpg_status status);
/* Process exit code for a status: 0 ok, 1 configuration, 2 runtime. */
MODCPG_API int modcpg_exit_code(modcpg_status status);

/* Weight sets (H x 3 weights plus gate source and 6 x 3 routing). */
MODCPG_API modcpg_status modcpg_weightset_create(const char* name, int hidden,
                                                 const char* gate_source,
                                                 modcpg_weightset** out);
MODCPG_API modcpg_status modcpg_weightset_load(const char* path,
                                               modcpg_weightset** out);
MODCPG_API modcpg_status modcpg_weightset_save(const modcpg_weightset* set,
                                               const char* path);
MODCPG_API modcpg_status modcpg_weightset_get(const modcpg_weightset* set,
                                              double* out, size_t count);
MODCPG_API modcpg_status modcpg_weightset_set(modcpg_weightset* set,
                                              const double* values,
                                              size_t count);
MODCPG_API modcpg_status modcpg_weightset_set_routing(modcpg_weightset* set,
                                                      const int* mask);
MODCPG_API const char* modcpg_weightset_name(const modcpg_weightset* set);
MODCPG_API int modcpg_weightset_hidden(const modcpg_weightset* set);
MODCPG_API void modcpg_weightset_destroy(modcpg_weightset* set);

/* Controller stack on the default oscillator / premotor model. */
MODCPG_API modcpg_status modcpg_controller_create(const modcpg_weightset* base,
                                                  modcpg_controller** out);
MODCPG_API int modcpg_controller_period(const modcpg_controller* ctl);
MODCPG_API modcpg_status modcpg_controller_add(modcpg_controller* ctl,
                                               const modcpg_weightset* module);
MODCPG_API modcpg_status modcpg_controller_remove(modcpg_controller* ctl,
                                                  const char* name);
MODCPG_API modcpg_status modcpg_controller_set_enabled(modcpg_controller* ctl,
                                                       const char* name,
                                                       int enabled);
/* gates: (left, right) pairs, one per enabled slot in slot order, so
 * gate_count == 2 * enabled slots. out receives MODCPG_OUTPUTS values. */
MODCPG_API modcpg_status modcpg_controller_motor_output(
    const modcpg_controller* ctl, long step, const double* gates,
    size_t gate_count, double* out);
MODCPG_API modcpg_status modcpg_controller_module_contribution(
    const modcpg_controller* ctl, long step, const double* gates,
    size_t gate_count, const char* name, double* out);
MODCPG_API void modcpg_controller_destroy(modcpg_controller* ctl);

/* Experiment commands. Requests are JSON documents; relative input paths
 * resolve against base_dir (NULL for the working directory). *out_json
 * receives a JSON summary. */
MODCPG_API modcpg_status modcpg_learn(const char* config_json,
                                      const char* base_dir, char** out_json);
MODCPG_API modcpg_status modcpg_evaluate(const char* request_json,
                                         const char* base_dir,
                                         char** out_json);
MODCPG_API modcpg_status modcpg_bench_pibb(const char* request_json,
                                           char** out_json);
MODCPG_API modcpg_status modcpg_inspect(const char* path, char** out_json);
MODCPG_API void modcpg_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MODCPG_MODCPG_H_ */
