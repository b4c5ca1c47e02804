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

#include "pauli.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace vcz {

namespace {

using complex = std::complex<double>;

const std::array<Eigen::Matrix2cd, 4>& pauli_table() {
  static const std::array<Eigen::Matrix2cd, 4> table = [] {
    std::array<Eigen::Matrix2cd, 4> t;
    const complex i(0.0, 1.0);
    t[0] << 1, 0, 0, 1;
    t[1] << 0, 1, 1, 0;
    t[2] << 0, -i, i, 0;
    t[3] << 1, 0, 0, -1;
    return t;
  }();
  return table;
}

int qubits_for_dim(Eigen::Index d, const char* what) {
  if (d < 2 || d > 16 || (d & (d - 1)) != 0) {
    throw std::invalid_argument(std::string(what) +
                                ": dimension must be a power of two in [2, 16]");
  }
  return std::countr_zero(static_cast<unsigned>(d));
}

void check_same_qubits(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": qubit-count mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::string pauli_name(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  throw std::invalid_argument("pauli_name: invalid label");
}

Pauli pauli_from_name(const std::string& name) {
  if (name == "I") return Pauli::I;
  if (name == "X") return Pauli::X;
  if (name == "Y") return Pauli::Y;
  if (name == "Z") return Pauli::Z;
  throw std::invalid_argument("pauli_from_name: unknown Pauli label '" + name + "'");
}

std::string fiducial_name(Fiducial f) {
  switch (f) {
    case Fiducial::Zero: return "zero";
    case Fiducial::One: return "one";
    case Fiducial::Plus: return "plus";
    case Fiducial::IPlus: return "i_plus";
  }
  throw std::invalid_argument("fiducial_name: invalid label");
}

Fiducial fiducial_from_name(const std::string& name) {
  if (name == "zero") return Fiducial::Zero;
  if (name == "one") return Fiducial::One;
  if (name == "plus") return Fiducial::Plus;
  if (name == "i_plus") return Fiducial::IPlus;
  throw std::invalid_argument("fiducial_from_name: unknown fiducial '" + name + "'");
}

const Eigen::Matrix2cd& pauli_matrix(Pauli p) {
  return pauli_table()[static_cast<int>(p)];
}

Eigen::MatrixXcd pauli_string_matrix(int n_qubits, Eigen::Index index) {
  if (n_qubits < 1 || n_qubits > 4) {
    throw std::invalid_argument("pauli_string_matrix: qubit count must be in [1, 4]");
  }
  const Eigen::Index total = Eigen::Index(1) << (2 * n_qubits);
  if (index < 0 || index >= total) {
    throw std::invalid_argument("pauli_string_matrix: index out of range");
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(1, 1);
  // Peel base-four digits from the most significant (first) qubit down.
  for (int q = n_qubits - 1; q >= 0; --q) {
    const int digit = static_cast<int>((index >> (2 * q)) & 3);
    result = Eigen::kroneckerProduct(result, pauli_table()[digit]).eval();
  }
  return result;
}

PauliState::PauliState(int n_qubits, Eigen::VectorXd coeffs)
    : n_qubits_(n_qubits), coeffs_(std::move(coeffs)) {
  if (n_qubits_ < 1 || coeffs_.size() != (Eigen::Index(1) << (2 * n_qubits_))) {
    throw std::invalid_argument("PauliState: coefficient length must be 4^n_qubits");
  }
}

PauliState PauliState::fiducial(Fiducial f) {
  switch (f) {
    case Fiducial::Zero: return bloch(0, 0, 1);
    case Fiducial::One: return bloch(0, 0, -1);
    case Fiducial::Plus: return bloch(1, 0, 0);
    case Fiducial::IPlus: return bloch(0, 1, 0);
  }
  throw std::invalid_argument("PauliState::fiducial: invalid label");
}

PauliState PauliState::bloch(double x, double y, double z) {
  Eigen::VectorXd c(4);
  c << 1.0, x, y, z;
  return PauliState(1, std::move(c));
}

PauliObservable::PauliObservable(int n_qubits, Eigen::RowVectorXd coeffs)
    : n_qubits_(n_qubits), coeffs_(std::move(coeffs)) {
  if (n_qubits_ < 1 || coeffs_.size() != (Eigen::Index(1) << (2 * n_qubits_))) {
    throw std::invalid_argument("PauliObservable: coefficient length must be 4^n_qubits");
  }
}

PauliObservable PauliObservable::pauli(Pauli p) {
  Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(4);
  c(static_cast<int>(p)) = 1.0;
  return PauliObservable(1, std::move(c));
}

PauliObservable PauliObservable::pauli_pair(Pauli a, Pauli b) {
  return tensor(pauli(a), pauli(b));
}

TransferMatrix::TransferMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) {
    throw std::invalid_argument("TransferMatrix: entries must be square");
  }
  const int pauli_qubits = qubits_for_dim(m_.rows(), "TransferMatrix");
  if (pauli_qubits % 2 != 0) {
    throw std::invalid_argument("TransferMatrix: dimension must be 4^n_qubits");
  }
  n_qubits_ = pauli_qubits / 2;
}

TransferMatrix TransferMatrix::identity(int n_qubits) {
  const Eigen::Index d = Eigen::Index(1) << (2 * n_qubits);
  return TransferMatrix(Eigen::MatrixXd::Identity(d, d));
}

TransferMatrix TransferMatrix::zero(int n_qubits) {
  const Eigen::Index d = Eigen::Index(1) << (2 * n_qubits);
  return TransferMatrix(Eigen::MatrixXd::Zero(d, d));
}

bool TransferMatrix::is_trace_preserving(double tol) const {
  Eigen::RowVectorXd top = Eigen::RowVectorXd::Zero(m_.cols());
  top(0) = 1.0;
  return (m_.row(0) - top).cwiseAbs().maxCoeff() <= tol;
}

TransferMatrix& TransferMatrix::operator+=(const TransferMatrix& rhs) {
  check_same_qubits(n_qubits_, rhs.n_qubits_, "TransferMatrix::operator+=");
  m_ += rhs.m_;
  return *this;
}

TransferMatrix& TransferMatrix::operator-=(const TransferMatrix& rhs) {
  check_same_qubits(n_qubits_, rhs.n_qubits_, "TransferMatrix::operator-=");
  m_ -= rhs.m_;
  return *this;
}

TransferMatrix& TransferMatrix::operator*=(double scale) {
  m_ *= scale;
  return *this;
}

TransferMatrix operator+(TransferMatrix lhs, const TransferMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

TransferMatrix operator-(TransferMatrix lhs, const TransferMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

TransferMatrix operator*(double scale, TransferMatrix rhs) {
  rhs *= scale;
  return rhs;
}

double expectation(const PauliObservable& obs, const PauliState& state) {
  check_same_qubits(obs.n_qubits(), state.n_qubits(), "expectation");
  return obs.coeffs() * state.coeffs();
}

TransferMatrix ptm_from_unitary(const Eigen::MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) {
    throw std::invalid_argument("ptm_from_unitary: matrix must be square");
  }
  qubits_for_dim(u.rows(), "ptm_from_unitary");
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  if ((gram - Eigen::MatrixXcd::Identity(u.rows(), u.rows())).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("ptm_from_unitary: matrix is not unitary");
  }
  return ptm_from_kraus({u});
}

TransferMatrix ptm_from_kraus(const std::vector<Eigen::MatrixXcd>& kraus) {
  if (kraus.empty()) {
    throw std::invalid_argument("ptm_from_kraus: empty operator list");
  }
  const Eigen::Index d = kraus.front().rows();
  const int n = qubits_for_dim(d, "ptm_from_kraus");
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("ptm_from_kraus: inconsistent operator shapes");
    }
  }
  const Eigen::Index dim = d * d;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& op : kraus) {
    std::vector<Eigen::MatrixXcd> moved(dim);
    for (Eigen::Index l = 0; l < dim; ++l) {
      moved[l] = op * pauli_string_matrix(n, l) * op.adjoint();
    }
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Eigen::MatrixXcd sk = pauli_string_matrix(n, k);
      for (Eigen::Index l = 0; l < dim; ++l) {
        t(k, l) += (sk * moved[l]).trace().real() / static_cast<double>(d);
      }
    }
  }
  return TransferMatrix(std::move(t));
}

TransferMatrix tensor(const TransferMatrix& a, const TransferMatrix& b) {
  return TransferMatrix(Eigen::kroneckerProduct(a.entries(), b.entries()).eval());
}

PauliState tensor(const PauliState& a, const PauliState& b) {
  Eigen::VectorXd c = Eigen::kroneckerProduct(a.coeffs(), b.coeffs()).eval();
  return PauliState(a.n_qubits() + b.n_qubits(), std::move(c));
}

PauliObservable tensor(const PauliObservable& a, const PauliObservable& b) {
  Eigen::RowVectorXd c = Eigen::kroneckerProduct(a.coeffs(), b.coeffs()).eval();
  return PauliObservable(a.n_qubits() + b.n_qubits(), std::move(c));
}

TransferMatrix compose(const TransferMatrix& after, const TransferMatrix& before) {
  check_same_qubits(after.n_qubits(), before.n_qubits(), "compose");
  return TransferMatrix(after.entries() * before.entries());
}

PauliState apply(const TransferMatrix& channel, const PauliState& state) {
  check_same_qubits(channel.n_qubits(), state.n_qubits(), "apply");
  return PauliState(state.n_qubits(), channel.entries() * state.coeffs());
}

PauliObservable apply(const PauliObservable& obs, const TransferMatrix& channel) {
  check_same_qubits(obs.n_qubits(), channel.n_qubits(), "apply");
  return PauliObservable(obs.n_qubits(), obs.coeffs() * channel.entries());
}

Eigen::MatrixXcd choi_from_ptm(const TransferMatrix& t) {
  const int n = t.n_qubits();
  const Eigen::Index d = Eigen::Index(1) << n;
  const Eigen::Index dim = t.dim();
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Eigen::MatrixXcd sk = pauli_string_matrix(n, k);
    for (Eigen::Index l = 0; l < dim; ++l) {
      if (t(k, l) == 0.0) continue;
      const Eigen::MatrixXcd sl_t = pauli_string_matrix(n, l).transpose();
      choi += t(k, l) * Eigen::kroneckerProduct(sl_t, sk).eval();
    }
  }
  choi /= static_cast<double>(dim);
  return choi;
}

double choi_min_eigenvalue(const TransferMatrix& t) {
  const Eigen::MatrixXcd choi = choi_from_ptm(t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(choi);
  return solver.eigenvalues().minCoeff();
}

}  // namespace vcz
