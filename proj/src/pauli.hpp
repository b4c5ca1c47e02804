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

/// @file pauli.hpp
/// Pauli-basis representation of states, observables and quantum channels.
///
/// Every linear map on density matrices is stored as a real transfer matrix
/// acting on the vector of Pauli coefficients.  For an n-qubit channel D the
/// entries are
///
///     T[k][l] = (1/d) * Tr[ sigma_k * D(sigma_l) ],   d = 2^n,
///
/// states are column vectors s[k] = Tr[rho * sigma_k] and observables are row
/// vectors o[k] = (1/d) * Tr[Q * sigma_k], so that <Q> = o . s is an ordinary
/// dot product and channel composition is matrix multiplication.  Multi-qubit
/// Pauli strings are indexed in base four with the first (A) qubit most
/// significant: sigma_k = sigma_{k_A} (x) sigma_{k_B} with k = 4*k_A + k_B.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace vcz {

/// Single-qubit Pauli label; the numeric value is the Pauli-basis index.
enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

/// The four informationally complete input states used throughout:
/// |0>, |1>, |+> = (|0>+|1>)/sqrt2 and |+i> = (|0>+i|1>)/sqrt2.
enum class Fiducial : int { Zero = 0, One = 1, Plus = 2, IPlus = 3 };

/// Returns "I", "X", "Y" or "Z".
std::string pauli_name(Pauli p);

/// Parses "I"/"X"/"Y"/"Z" (case sensitive); throws std::invalid_argument.
Pauli pauli_from_name(const std::string& name);

/// Returns "zero", "one", "plus" or "i_plus".
std::string fiducial_name(Fiducial f);

/// Parses a fiducial name; throws std::invalid_argument on anything else.
Fiducial fiducial_from_name(const std::string& name);

/// The 2x2 matrix of a single-qubit Pauli.
const Eigen::Matrix2cd& pauli_matrix(Pauli p);

/// The d x d matrix of the Pauli string with base-four index `index`
/// (first qubit most significant).  Requires 0 <= index < 4^n_qubits.
Eigen::MatrixXcd pauli_string_matrix(int n_qubits, Eigen::Index index);

/// A state in Pauli-coefficient form.  Physical states have coeffs[0] == 1
/// (unit trace); subnormalised vectors appear as intermediate results of
/// non-trace-preserving maps such as projections.
class PauliState {
 public:
  PauliState(int n_qubits, Eigen::VectorXd coeffs);

  /// Single-qubit fiducial input state.
  static PauliState fiducial(Fiducial f);

  /// Single-qubit state from a Bloch vector (x, y, z).
  static PauliState bloch(double x, double y, double z);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return coeffs_.size(); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  double operator[](Eigen::Index k) const { return coeffs_(k); }

  /// Tr[rho]; equals coeffs[0] by construction.
  double trace() const { return coeffs_(0); }

 private:
  int n_qubits_;
  Eigen::VectorXd coeffs_;
};

/// An observable in Pauli-coefficient (row-vector) form.
class PauliObservable {
 public:
  PauliObservable(int n_qubits, Eigen::RowVectorXd coeffs);

  /// The unit observable sigma_p on one qubit.
  static PauliObservable pauli(Pauli p);

  /// The product observable sigma_a (x) sigma_b on two qubits.
  static PauliObservable pauli_pair(Pauli a, Pauli b);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return coeffs_.size(); }
  const Eigen::RowVectorXd& coeffs() const { return coeffs_; }

 private:
  int n_qubits_;
  Eigen::RowVectorXd coeffs_;
};

/// A channel (or any linear map on density matrices) in transfer-matrix form.
/// Supports the linear structure needed for quasi-probability decompositions:
/// scaling, addition and subtraction of maps on the same number of qubits.
class TransferMatrix {
 public:
  explicit TransferMatrix(Eigen::MatrixXd entries);

  static TransferMatrix identity(int n_qubits);
  static TransferMatrix zero(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXd& entries() const { return m_; }
  double operator()(Eigen::Index k, Eigen::Index l) const { return m_(k, l); }

  /// True when the map preserves trace: first row equals (1, 0, ..., 0).
  bool is_trace_preserving(double tol = 1e-12) const;

  TransferMatrix& operator+=(const TransferMatrix& rhs);
  TransferMatrix& operator-=(const TransferMatrix& rhs);
  TransferMatrix& operator*=(double scale);

 private:
  int n_qubits_;
  Eigen::MatrixXd m_;
};

TransferMatrix operator+(TransferMatrix lhs, const TransferMatrix& rhs);
TransferMatrix operator-(TransferMatrix lhs, const TransferMatrix& rhs);
TransferMatrix operator*(double scale, TransferMatrix rhs);

/// <Q> = o . s.  Throws std::invalid_argument on qubit-count mismatch.
double expectation(const PauliObservable& obs, const PauliState& state);

/// Transfer matrix of the unitary conjugation rho -> U rho U^dagger.
/// U must be square with power-of-two dimension in [2, 16] and unitary to
/// within `tol`; otherwise throws std::invalid_argument.
TransferMatrix ptm_from_unitary(const Eigen::MatrixXcd& u, double tol = 1e-10);

/// Transfer matrix of the (not necessarily trace-preserving) map
/// rho -> sum_i K_i rho K_i^dagger.
TransferMatrix ptm_from_kraus(const std::vector<Eigen::MatrixXcd>& kraus);

/// Tensor product of two channels; qubit counts add, A-side most significant.
TransferMatrix tensor(const TransferMatrix& a, const TransferMatrix& b);

/// Tensor product of two states.
PauliState tensor(const PauliState& a, const PauliState& b);

/// Tensor product of two observables.
PauliObservable tensor(const PauliObservable& a, const PauliObservable& b);

/// Composition `after . before` (before acts first).
TransferMatrix compose(const TransferMatrix& after, const TransferMatrix& before);

/// Applies a channel to a state.
PauliState apply(const TransferMatrix& channel, const PauliState& state);

/// Applies a channel to an observable in the Heisenberg sense: o -> o * T.
PauliObservable apply(const PauliObservable& obs, const TransferMatrix& channel);

/// The Choi matrix C = (1/d^2) sum_{k,l} T[k][l] sigma_l^T (x) sigma_k,
/// normalised to Tr[C] = 1 for trace-preserving maps.  Complete positivity of
/// the map is equivalent to C >= 0.
Eigen::MatrixXcd choi_from_ptm(const TransferMatrix& t);

/// Smallest eigenvalue of the Choi matrix; negative values flag non-physical
/// (for example sampled or mitigated) process estimates.
double choi_min_eigenvalue(const TransferMatrix& t);

}  // namespace vcz
