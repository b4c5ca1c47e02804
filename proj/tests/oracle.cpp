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

#include "oracle.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {
const std::complex<double> kI(0.0, 1.0);
}

Mat sigma(int k) {
  Mat m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -kI, kI, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("oracle::sigma: bad index");
  }
  return m;
}

Mat sigma_string(int n_qubits, int index) {
  Mat result = Mat::Identity(1, 1);
  for (int q = n_qubits - 1; q >= 0; --q) {
    result = Eigen::kroneckerProduct(result, sigma((index >> (2 * q)) & 3)).eval();
  }
  return result;
}

Mat u_rz(double theta) {
  Mat m(2, 2);
  m << std::exp(kI * (theta / 2)), 0, 0, std::exp(-kI * (theta / 2));
  return m;
}

Mat u_rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat m(2, 2);
  m << c, kI * s, kI * s, c;
  return m;
}

Mat u_ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat m(2, 2);
  m << c, s, -s, c;
  return m;
}

Mat u_h() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Mat u_cz() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Mat projector(int axis, int sign) {
  if (axis < 1 || axis > 3 || (sign != 1 && sign != -1)) {
    throw std::invalid_argument("oracle::projector: bad axis/sign");
  }
  return (sigma(0) + static_cast<double>(sign) * sigma(axis)) / 2.0;
}

Mat dm_zero() {
  Mat m(2, 2);
  m << 1, 0, 0, 0;
  return m;
}

Mat dm_one() {
  Mat m(2, 2);
  m << 0, 0, 0, 1;
  return m;
}

Mat dm_plus() {
  Mat m(2, 2);
  m << 0.5, 0.5, 0.5, 0.5;
  return m;
}

Mat dm_iplus() {
  Mat m(2, 2);
  m << 0.5, -0.5 * kI, 0.5 * kI, 0.5;
  return m;
}

Mat dm_fiducial(const std::string& name) {
  if (name == "zero") return dm_zero();
  if (name == "one") return dm_one();
  if (name == "plus") return dm_plus();
  if (name == "i_plus") return dm_iplus();
  throw std::invalid_argument("oracle::dm_fiducial: unknown name " + name);
}

Mat apply_unitary(const Mat& u, const Mat& rho) { return u * rho * u.adjoint(); }

Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

std::vector<Mat> kraus_depolarizing(double p) {
  return {std::sqrt(1.0 - 0.75 * p) * sigma(0), std::sqrt(p / 4.0) * sigma(1),
          std::sqrt(p / 4.0) * sigma(2), std::sqrt(p / 4.0) * sigma(3)};
}

std::vector<Mat> kraus_amplitude_damping(double gamma) {
  Mat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return {k0, k1};
}

std::vector<Mat> kraus_dephasing(double z) {
  return {std::sqrt((1.0 + z) / 2.0) * sigma(0), std::sqrt((1.0 - z) / 2.0) * sigma(3)};
}

double expect(const Mat& obs, const Mat& rho) { return (obs * rho).trace().real(); }

Eigen::MatrixXd ptm_of_map(int n_qubits, const std::function<Mat(const Mat&)>& map) {
  const int d = 1 << n_qubits;
  const int dim = d * d;
  Eigen::MatrixXd t(dim, dim);
  for (int l = 0; l < dim; ++l) {
    const Mat mapped = map(sigma_string(n_qubits, l));
    for (int k = 0; k < dim; ++k) {
      t(k, l) = (sigma_string(n_qubits, k) * mapped).trace().real() / d;
    }
  }
  return t;
}

Eigen::VectorXd coeffs_of_dm(int n_qubits, const Mat& rho) {
  const int dim = (1 << n_qubits) * (1 << n_qubits);
  Eigen::VectorXd s(dim);
  for (int k = 0; k < dim; ++k) {
    s(k) = (rho * sigma_string(n_qubits, k)).trace().real();
  }
  return s;
}

Mat on_a(const Mat& u) { return Eigen::kroneckerProduct(u, Mat::Identity(2, 2)).eval(); }
Mat on_b(const Mat& u) { return Eigen::kroneckerProduct(Mat::Identity(2, 2), u).eval(); }

}  // namespace oracle
