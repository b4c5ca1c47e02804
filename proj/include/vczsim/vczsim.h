/* Copyright 2026 The vczsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* vczsim.h -- C API of the virtual-CZ simulator shared library.
 *
 * The library simulates a two-qubit CZ gate assembled virtually from local
 * single-qubit circuits with mid-circuit measurements, and provides process
 * tomography plus probabilistic error cancellation of the measurement and
 * projection errors.  This header is the only supported binary interface;
 * the C++ core behind it is not exported.
 *
 * Conventions:
 *  - Every fallible function returns a vcz_status and reports details through
 *    vcz_last_error(), which is thread-local and valid until the next API call
 *    on the same thread.
 *  - Objects are opaque handles created and destroyed by this library.
 *    Out-parameters are written only on VCZ_OK.
 *  - Strings returned through `char **out` parameters are heap-allocated and
 *    must be released with vcz_string_free().
 *  - Commands write their artifact files (reports, calibration bundles, CSV
 *    tables) under the configured output directory and additionally return
 *    the main report as a string.  Report bytes depend only on the canonical
 *    configuration (noise, shots, repetitions, seed, mode, mitigation) and
 *    the input files -- never on worker count or wall-clock time -- and are
 *    byte-identical across reruns.
 */

#pragma once

#include <stddef.h>

#if defined(_WIN32)
#if defined(VCZ_BUILD_SHARED)
#define VCZ_API __declspec(dllexport)
#else
#define VCZ_API __declspec(dllimport)
#endif
#else
#define VCZ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------------- */
/* Status codes                                                              */

typedef enum vcz_status {
  VCZ_OK = 0,
  /* A caller mistake: null pointer, unknown key, out-of-range value, or an
   * option combination the command rejects. */
  VCZ_ERROR_INVALID_ARGUMENT = 1,
  /* The operating system failed to read or write a file. */
  VCZ_ERROR_IO = 2,
  /* A file was read but its content is not what it claims to be: malformed
   * JSON/CSV, wrong schema version, or the wrong kind of report. */
  VCZ_ERROR_SCHEMA = 3,
  /* A numerically singular calibration made mitigation impossible. */
  VCZ_ERROR_NUMERICAL = 4,
  /* Any other failure; a bug if it ever surfaces. */
  VCZ_ERROR_INTERNAL = 5
} vcz_status;

/* The library version as "major.minor.patch".  Static storage; do not free. */
VCZ_API const char *vcz_version(void);

/* The enumerator name for `status` ("VCZ_OK", ...).  Static storage. */
VCZ_API const char *vcz_status_name(vcz_status status);

/* Message of the most recent failure on the calling thread, or "" if the last
 * call succeeded.  The pointer is invalidated by the next API call on this
 * thread; copy the string if you need to keep it. */
VCZ_API const char *vcz_last_error(void);

/* ------------------------------------------------------------------------- */
/* Configuration handles                                                     */

/* An experiment configuration: noise model, shot budget, seed, run mode,
 * mitigation strategy and output directory. */
typedef struct vcz_config vcz_config;

/* Creates a configuration with the library defaults (ideal noise, shot mode,
 * no mitigation, outputs in the current directory). */
VCZ_API vcz_status vcz_config_create(vcz_config **out_config);

/* Loads a configuration from a JSON file.  Unknown keys and schema-version
 * mismatches are rejected (VCZ_ERROR_SCHEMA for version problems,
 * VCZ_ERROR_INVALID_ARGUMENT for bad values). */
VCZ_API vcz_status vcz_config_load_file(const char *path,
                                        vcz_config **out_config);

/* Releases a configuration.  NULL is allowed. */
VCZ_API void vcz_config_free(vcz_config *config);

/* Field setters.  Keys accepted per type:
 *   set_int:    "shots", "repetitions", "workers", "dump_shots" (0 or 1)
 *   set_uint:   "seed"
 *   set_string: "noise" ("ideal" or "paper-device"), "mode" ("exact" or
 *               "shots"), "mitigation" ("none", "measurement" or "full-pec"),
 *               "outputs" (directory path)
 * Enumerated values are checked immediately; numeric ranges are checked when
 * a command runs.  An unknown key is VCZ_ERROR_INVALID_ARGUMENT. */
VCZ_API vcz_status vcz_config_set_int(vcz_config *config, const char *key,
                                      long long value);
VCZ_API vcz_status vcz_config_set_uint(vcz_config *config, const char *key,
                                       unsigned long long value);
VCZ_API vcz_status vcz_config_set_string(vcz_config *config, const char *key,
                                         const char *value);

/* ------------------------------------------------------------------------- */
/* Commands                                                                  */

/* Measures the calibration bundle (preparation and measurement matrices,
 * assignment fidelity, measurement quasi-probabilities and the projection
 * basis fits).  Writes OUT/calibration.json and returns it. */
VCZ_API vcz_status vcz_calibrate(const vcz_config *config, char **out_json);

/* Process tomography of the five local decomposition variants of one side,
 * with per-constituent deviations from the ideal.  `calibration_path` may
 * name a saved calibration.json to reuse; pass NULL to calibrate on the fly
 * (mitigated runs only).  Writes OUT/qpt_report.json and returns it. */
VCZ_API vcz_status vcz_qpt(const vcz_config *config,
                           const char *calibration_path, char **out_json);

/* The headline experiment: constituent tomography on both sides, repeated
 * per the configuration, with per-repetition assembly of the virtual CZ
 * transfer matrix and its average gate fidelity (raw and, if configured,
 * mitigated).  `calibration_path` as in vcz_qpt.  Writes
 * OUT/virtual_cz_qpt_report.json and returns it. */
VCZ_API vcz_status vcz_virtual_cz_qpt(const vcz_config *config,
                                      const char *calibration_path,
                                      char **out_json);

/* Expectation value of a two-qubit circuit (JSON file at `circuit_path`,
 * exactly one CZ) via the ten-term local recombination, or -- when
 * `quasiprob_sampling` is nonzero -- by sampling the six-pair
 * quasi-probability plan.  Writes OUT/expectation_report.json (and, with
 * dump_shots, per-variant CSVs under OUT/shots/) and returns the report. */
VCZ_API vcz_status vcz_expectation(const vcz_config *config,
                                   const char *circuit_path,
                                   int quasiprob_sampling, char **out_json);

/* Summarizes saved reports into a fidelity/expectation table.  Writes
 * OUT/summary.txt, OUT/fidelity_table.csv and per-report transfer-matrix
 * CSVs; returns the text table. */
VCZ_API vcz_status vcz_report(const vcz_config *config,
                              const char *const *report_paths, size_t n_paths,
                              char **out_text);

/* Releases a string returned through a `char **out` parameter.  NULL is
 * allowed. */
VCZ_API void vcz_string_free(char *s);

#ifdef __cplusplus
} /* extern "C" */
#endif
