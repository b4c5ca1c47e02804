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

/// @file harness.hpp
/// Experiment orchestration: calibrate -> run -> mitigate -> report.  Every
/// command validates its config, writes its artifact files under
/// `config.outputs` (created on demand) and returns the report it wrote.
///
/// Determinism contract: a command's report depends only on the canonical
/// config echo (noise, shots, repetitions, seed, mode, mitigation) and its
/// inputs — never on worker count, wall-clock time or output paths — and is
/// byte-identical across reruns.  Timing is the caller's concern (the CLI
/// prints it to stderr).
///
/// Calibration policy: when a mitigated run is not handed a saved bundle it
/// calibrates once up front (same config and seed) and records that bundle
/// in the report.  Calibration is never repeated per repetition; the choice
/// is surfaced in the report as "calibration_policy".

#pragma once

#include "circuit.hpp"
#include "config.hpp"
#include "pec.hpp"
#include "tomography.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vcz {

/// Everything cmd_calibrate measures, in memory.
struct CalibrationBundle {
  Eigen::Matrix4d prep;               // A, the analytic preparation matrix
  Eigen::Matrix4d gram;               // G, measured
  Eigen::Matrix4d measurement_error;  // B = G A^-1
  double prep_condition = 0.0;
  double measurement_condition = 0.0;
  double assignment = 1.0;  // (p_gg + p_ee) / 2, analytic in exact mode
  std::array<QuasiProbability, 4> measurement_quasiprob;  // I, X, Y, Z
  ProjectionBasis projection_basis;
};

/// Measures the bundle per config (exact or shot mode).  Throws on singular
/// calibration data.
CalibrationBundle run_calibration(const ExperimentConfig& config);

Json calibration_to_json(const ExperimentConfig& config,
                         const CalibrationBundle& bundle);
CalibrationBundle calibration_from_json(const Json& j);

/// Writes OUT/calibration.json; returns its content.
Json cmd_calibrate(const ExperimentConfig& config);

/// Process tomography of the five decomposition variants of one side.
/// Writes OUT/qpt_report.json with the (optionally mitigated) constituent
/// transfer matrices and their deviations from the ideal constituents.
Json cmd_qpt(const ExperimentConfig& config,
             const std::optional<std::filesystem::path>& bundle_path);

/// The headline experiment: constituent QPT on both sides, repeated, with
/// per-repetition assembly of the virtual CZ transfer matrix and its average
/// gate fidelity.  Writes OUT/virtual_cz_qpt_report.json.
Json cmd_virtual_cz_qpt(const ExperimentConfig& config,
                        const std::optional<std::filesystem::path>& bundle_path);

/// Expectation-value estimation for a two-qubit circuit with one CZ, via the
/// ten-term recombination (or quasi-probability sampling of the six circuit
/// pairs).  Writes OUT/expectation_report.json; with config.dump_shots, also
/// OUT/shots/*.csv for repetition 0.
Json cmd_expectation(const ExperimentConfig& config,
                     const std::filesystem::path& circuit_path,
                     bool quasiprob_sampling);

/// Summarizes saved reports: fidelity/expectation table (text + CSV) and the
/// transfer-matrix grids as CSV.  Returns the text table; writes
/// OUT/summary.txt, OUT/fidelity_table.csv and OUT/<stem>_ptm_*.csv.
std::string cmd_report(const ExperimentConfig& config,
                       const std::vector<std::filesystem::path>& report_paths);

}  // namespace vcz
