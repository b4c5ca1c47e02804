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

// Probabilistic error cancellation (PEC) for the two error sources of the
// protocol: readout confusion on final measurements and imperfect projection
// gates.
//
// Measurement mitigation expresses the ideal measurement row as a
// quasi-probability combination of the noisy measurement rows,
// q_k = e_k B^{-1}, where B is the effective measurement matrix estimated
// from prepare-and-measure calibration circuits.
//
// Projection mitigation expresses the ideal projections P+Z / P-Z as
// least-squares combinations (coefficients gamma / delta) of the seven
// experimentally characterized operations
// {idle, P+X, P-X, P+Y, P-Y, P+Z, P-Z}, each realized with a mid-circuit
// measurement conjugated by basis-change rotations and characterized with
// measurement-mitigated process tomography.
//
// `sequential_mitigated_expectation` chains both layers for a projection
// sub-circuit: a double weighted sum over the 4 measurement settings and the
// 7 basis operations (28 terms, exhaustive by default; an unbiased sampling
// mode is retained to reproduce hardware-style variance).  A single
// observable index is used throughout the double sum.

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "channels.hpp"
#include "pauli.hpp"
#include "rng.hpp"
#include "subcircuit.hpp"
#include "tomography.hpp"
#include "virtual_gate.hpp"

namespace vcz {

/// A signed resolution of an ideal target over a noisy basis: coefficients
/// q, sampling probabilities p = |q|/gamma, weights w = sign(q) * gamma,
/// overhead gamma = sum |q|.  Invariant: w_l * p_l = q_l.
struct QuasiProbability {
  std::string target;
  Eigen::VectorXd coeffs;
  Eigen::VectorXd probs;
  Eigen::VectorXd weights;
  double gamma = 1.0;
};

/// Fills probs/weights/gamma from coeffs (coeffs and target already set).
QuasiProbability make_quasi_probability(std::string target,
                                        Eigen::VectorXd coeffs);

/// q_k = e_k B^{-1} over the four measurement settings {I, X, Y, Z}.
/// Throws if B is singular or its condition number exceeds 1e8.
QuasiProbability quasi_prob_vector(Pauli k, const Eigen::Matrix4d& b);

/// Exhaustive measurement mitigation: sum_l q_l * raw_l, where raw holds the
/// measured expectations of the four settings (raw_0 is the identity setting,
/// +1 for trace-preserving circuits, the branch fraction otherwise).
double mitigate_measurement(const Eigen::Vector4d& raw,
                            const QuasiProbability& q);

/// Sampling-mode measurement mitigation of one sub-circuit expectation:
/// per sample a setting l ~ p is drawn, the circuit runs one shot with that
/// observable, and the estimate averages w_l * outcome.  The sub-circuit's
/// own observable selects the quasi-probability target; mid-measured
/// sub-circuits yield both branch values.
BranchExpectation mitigate_measurement_sampled(const SubCircuitSpec& spec,
                                               const NoiseModel& noise,
                                               const Eigen::Matrix4d& b,
                                               long long n_samples,
                                               const StreamKey& key);

/// The seven implementable projection-type operations.
enum class ProjectionOp {
  Idle = 0,
  PlusX,
  MinusX,
  PlusY,
  MinusY,
  PlusZ,
  MinusZ,
};

inline constexpr int kProjectionBasisSize = 7;

const char* projection_op_name(ProjectionOp op);

/// Physical realization: basis-change rotations around a mid-circuit Z
/// measurement (branch picks the recorded sign); Idle occupies the slot with
/// an identity unitary and has branch 0.
struct ProjectionOpRealization {
  ChannelCircuit circuit;
  int branch;  // +1 / -1 for projections, 0 for Idle
};

ProjectionOpRealization projection_op_realization(ProjectionOp op);

/// Ideal PTMs of the seven operations, in enum order.
std::array<TransferMatrix, kProjectionBasisSize> ideal_projection_ops();

/// Result of the 16x7 least-squares fit of a target PTM over the basis.
struct ProjectionFit {
  Eigen::VectorXd coefficients;  // 7 entries, enum order
  double residual = 0.0;         // 2-norm of the reconstruction error
  int rank = 0;                  // numerical rank at the 1e-10 cutoff
  double gamma = 1.0;            // sum |coefficients|
};

ProjectionFit fit_projection_quasiprob(
    const std::array<TransferMatrix, kProjectionBasisSize>& basis,
    const TransferMatrix& target);

/// The characterized basis together with the fits for the two ideal Z
/// projections (gamma for P+Z, delta for P-Z).
struct ProjectionBasis {
  std::array<TransferMatrix, kProjectionBasisSize> ops;
  ProjectionFit gamma_fit;
  ProjectionFit delta_fit;
};

/// Measurement-mitigated process tomography of all seven operations.
/// `measurement_error` is the calibrated B matrix (identity to skip).
ProjectionBasis characterize_projection_basis_exact(
    const NoiseModel& noise, const Eigen::Matrix4d& measurement_error);
ProjectionBasis characterize_projection_basis_shots(
    const NoiseModel& noise, const Eigen::Matrix4d& measurement_error,
    long long n_shots, const StreamKey& key, int workers = 1);

/// Replaces the projection constituents of an assembled side by their fitted
/// quasi-probability combinations over the characterized basis.
CzConstituents apply_projection_mitigation(const CzConstituents& measured,
                                           const ProjectionBasis& basis);

struct SequentialResult {
  double value = 0.0;
  double std_error = 0.0;
  double gamma = 1.0;  // combined overhead gamma_measurement * gamma_fit
  long long shots_used = 0;              // accepted shots (0 in exact mode)
  long long postselection_resamples = 0; // discarded initialization attempts
};

/// Fully mitigated expectation of a projection sub-circuit (slot must be the
/// mid-circuit measurement).  `fit` selects which ideal projection replaces
/// the slot (the basis' gamma_fit for P+Z, delta_fit for P-Z); measurement
/// errors are mitigated with q from `b`.  Exhaustive double sum over
/// (setting l, basis op u).
SequentialResult sequential_mitigated_expectation_exact(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b);

/// Same sum with each (l, u) term estimated from `n_shots` shots; standard
/// errors combine in quadrature with the term weights.
SequentialResult sequential_mitigated_expectation_shots(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b, long long n_shots,
    const StreamKey& key, int workers = 1);

/// Unbiased sampling mode: per sample (l, u) is drawn with probability
/// p_l * p_u, one shot runs, and the estimate averages
/// w_l * w_u * outcome * [mid outcome matches u's branch].
SequentialResult sequential_mitigated_expectation_sampled(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b, long long n_samples,
    const StreamKey& key);

}  // namespace vcz

