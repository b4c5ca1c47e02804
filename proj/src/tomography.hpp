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

#pragma once

// Single-qubit state and process tomography.
//
// Conventions:
//  * Preparations are the four fiducials (zero, one, plus, i_plus), whose
//    coefficient vectors form the columns of the ideal preparation matrix A.
//  * Measurement settings are the Pauli bases; a "measurement table" R has
//    R[k][prep] = measured expectation of sigma_k on preparation `prep`.
//    Row k=0 (identity) is analytic: +1 for trace-preserving circuits, and
//    the recorded branch fraction for mid-measured slots.
//  * Linear inversion: T = R A^{-1}.  State preparation is taken as ideal,
//    so preparation errors are never divided out.
//  * The Gram table G of prepare-and-measure circuits (no slot in between)
//    satisfies G = B A with B the effective measurement matrix; measurement
//    mitigation of a table is R -> B^{-1} R.

#include <optional>

#include <Eigen/Dense>

#include "channels.hpp"
#include "pauli.hpp"
#include "rng.hpp"
#include "subcircuit.hpp"
#include "virtual_gate.hpp"

namespace vcz {

/// Columns: coefficient vectors of zero, one, plus, i_plus (in Fiducial
/// order); rows: sigma_I..sigma_Z components.
Eigen::Matrix4d ideal_state_prep_matrix();

/// State tomography: Pauli expectations -> normalized single-qubit state.
PauliState qst_from_expectations(double x, double y, double z);

struct LinearInversionResult {
  TransferMatrix transfer;  // T = R A^{-1}
  double prep_condition;    // 2-norm condition number of A
};

/// Inverts a measurement table against the ideal preparations.
LinearInversionResult qpt_linear_inversion(const Eigen::Matrix4d& measured);

/// B = G A^{-1} for a measured Gram table.
Eigen::Matrix4d measurement_error_matrix(const Eigen::Matrix4d& gram);

/// Applies measurement mitigation to a table: B^{-1} R.  Throws if B is
/// numerically singular.
Eigen::Matrix4d apply_measurement_mitigation(const Eigen::Matrix4d& table,
                                             const Eigen::Matrix4d& b);

/// Average gate fidelity between a measured channel and a target channel of
/// the same dimension: F = (Tr[T_target^T T]/d + 1) / (d + 1).
double average_gate_fidelity(const TransferMatrix& channel,
                             const TransferMatrix& target);

/// Measurement tables of one slot.  `minus` is present exactly when the slot
/// is a mid-circuit measurement, holding the recorded-(-) branch table.
/// Shot-mode accounting: `total_shots` counts accepted shots over all
/// tomography circuits and `postselection_resamples` the initialization
/// attempts discarded on top of them (both zero in exact mode).
struct QptTables {
  Eigen::Matrix4d main = Eigen::Matrix4d::Zero();
  std::optional<Eigen::Matrix4d> minus;
  long long total_shots = 0;
  long long postselection_resamples = 0;
};

/// A channel under test, as embedded between preparation and measurement.
/// `pre`/`post` belong to the op itself (e.g. basis-change rotations around
/// a mid-circuit measurement); `slot == nullopt` reduces to a
/// prepare-and-measure circuit.
struct ChannelCircuit {
  std::vector<Gate> pre;
  std::optional<Slot> slot;
  std::vector<Gate> post;
};

/// Exact tables: 4 preparations x 3 measured bases, identity row analytic
/// (measured for mid-measurement slots, where it is the branch fraction).
QptTables measure_qpt_tables_exact(const ChannelCircuit& circuit,
                                   const NoiseModel& noise);
QptTables measure_qpt_tables_exact(const std::optional<Slot>& slot,
                                   const NoiseModel& noise);

/// Shot-based tables; each of the 12 (16 for mid slots) circuits draws from
/// its own stream derived from `key` and is dispatched through the executor.
/// Results do not depend on `workers`.
QptTables measure_qpt_tables_shots(const ChannelCircuit& circuit,
                                   const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers = 1);
QptTables measure_qpt_tables_shots(const std::optional<Slot>& slot,
                                   const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers = 1);

/// Gram table (no slot).
Eigen::Matrix4d measure_gram_exact(const NoiseModel& noise);
Eigen::Matrix4d measure_gram_shots(const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers = 1);

/// Tables for the five decomposition variants of one side (the mid-measured
/// variant contributes two constituent channels).
struct ConstituentTables {
  QptTables rot_plus;   // j=1
  QptTables rot_minus;  // j=2
  QptTables mid;        // j=3, both branches
  QptTables idle;       // j=4
  QptTables flip;       // j=5
};

ConstituentTables measure_side_constituents_exact(const NoiseModel& noise);
ConstituentTables measure_side_constituents_shots(const NoiseModel& noise,
                                                  long long n_shots,
                                                  const StreamKey& key,
                                                  int workers = 1);

/// Linear inversion of all six constituent tables, optionally preceded by
/// measurement mitigation with B.
CzConstituents invert_constituents(
    const ConstituentTables& tables,
    const std::optional<Eigen::Matrix4d>& measurement_error = std::nullopt);

/// Analytic assignment fidelity of the recorded Z measurement.
double assignment_fidelity(const NoiseModel& noise);

/// Shot-based estimate from prepare-ground / prepare-excited sequences.
/// Records are tallied against the *true* pre-confusion collapse state, so
/// preparation imperfections do not bias the estimate.
struct AssignmentEstimate {
  double value = 0.0;  // (p_gg + p_ee) / 2
  double p_gg = 0.0;
  double p_ee = 0.0;
  long long n_ground = 0;   // tally sizes by true state
  long long n_excited = 0;
};

AssignmentEstimate estimate_assignment_fidelity(const NoiseModel& noise,
                                                long long shots_per_state,
                                                const StreamKey& key);

}  // namespace vcz

