// Copyright 2026 The vczsim Authors
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

/// @file config.hpp
/// Experiment configuration: the JSON schema (versioned), noise presets, and
/// the canonical config echo embedded in every report.
///
/// Schema (version 1):
///   {
///     "schema_version": 1,
///     "noise": "ideal" | "paper-device" | { p_gg, p_ee, f_init, t1, t2,
///                                           op_duration,
///                                           single_qubit_depolarizing },
///     "shots": 10000,          // per circuit, shot mode
///     "repetitions": 100,      // independent repeats of every circuit
///     "seed": 0,
///     "mode": "exact" | "shots",
///     "mitigation": "none" | "measurement" | "full-pec",
///     "outputs": "DIR",        // optional; CLI --out overrides
///     "workers": 0             // optional; 0 = all cores, CLI --workers overrides
///   }
/// Unknown keys are rejected.  `outputs`, `workers` and the shot-record dump
/// flag are execution details: they are excluded from the canonical echo and
/// never affect results (see the determinism contract).

#pragma once

#include "channels.hpp"
#include "io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace vcz {

inline constexpr int kSchemaVersion = 1;

enum class RunMode { Exact, Shots };
enum class Mitigation { None, Measurement, FullPec };

RunMode parse_run_mode(const std::string& name);
Mitigation parse_mitigation(const std::string& name);
const char* run_mode_name(RunMode mode);
const char* mitigation_name(Mitigation mitigation);

/// "ideal" or "paper-device"; throws std::invalid_argument otherwise.
NoiseModel noise_preset(const std::string& name);

Json noise_to_json(const NoiseModel& noise);
NoiseModel noise_from_json(const Json& j);

struct ExperimentConfig {
  NoiseModel noise;           // resolved model
  std::string noise_preset_name;  // empty when noise was given inline
  long long shots = 10000;
  long long repetitions = 100;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::Shots;
  Mitigation mitigation = Mitigation::None;
  std::filesystem::path outputs = ".";
  int workers = 0;            // 0 = all hardware threads
  bool dump_shots = false;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  /// The reproducibility key: everything that determines results, nothing
  /// that does not.
  Json canonical_echo() const;
};

ExperimentConfig config_from_json(const Json& j);
ExperimentConfig load_config_file(const std::filesystem::path& path);

}  // namespace vcz
