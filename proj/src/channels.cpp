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

#include "channels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vcz {

namespace {

using complex = std::complex<double>;
const complex kImag(0.0, 1.0);

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("NoiseModel: ") + name +
                                " must lie in [0, 1]");
  }
}

void check_projection(const ProjectionAxisSign& p) {
  if (p.axis == Pauli::I || (p.sign != 1 && p.sign != -1)) {
    throw std::invalid_argument(
        "projection_channel: axis must be X/Y/Z and sign must be +1 or -1");
  }
}

}  // namespace

Gate rz(double theta) { return Gate{GateKind::RZ, theta}; }
Gate rx(double theta) { return Gate{GateKind::RX, theta}; }
Gate ry(double theta) { return Gate{GateKind::RY, theta}; }
Gate gate_i() { return Gate{GateKind::I, 0.0}; }
Gate gate_z() { return Gate{GateKind::Z, 0.0}; }
Gate gate_h() { return Gate{GateKind::H, 0.0}; }
Gate gate_cz() { return Gate{GateKind::CZ, 0.0}; }

bool is_physical_pulse(const Gate& g) {
  switch (g.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::H:
      return true;
    default:
      return false;
  }
}

int gate_qubit_count(GateKind kind) { return kind == GateKind::CZ ? 2 : 1; }

std::string gate_label(const Gate& g) {
  std::ostringstream out;
  switch (g.kind) {
    case GateKind::RZ: out << "RZ"; break;
    case GateKind::RX: out << "RX"; break;
    case GateKind::RY: out << "RY"; break;
    case GateKind::I: return "I";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::CZ: return "CZ";
  }
  out << "(" << (g.theta >= 0 ? "+" : "") << g.theta << ")";
  return out.str();
}

Eigen::MatrixXcd gate_unitary(const Gate& g) {
  const bool rotation =
      g.kind == GateKind::RZ || g.kind == GateKind::RX || g.kind == GateKind::RY;
  if (rotation && !std::isfinite(g.theta)) {
    throw std::invalid_argument("gate_unitary: rotation angle must be finite");
  }
  const double c = std::cos(g.theta / 2);
  const double s = std::sin(g.theta / 2);
  Eigen::MatrixXcd m;
  switch (g.kind) {
    case GateKind::RZ:
      m.resize(2, 2);
      m << std::exp(kImag * (g.theta / 2)), 0, 0, std::exp(-kImag * (g.theta / 2));
      return m;
    case GateKind::RX:
      m.resize(2, 2);
      m << c, kImag * s, kImag * s, c;
      return m;
    case GateKind::RY:
      m.resize(2, 2);
      m << c, s, -s, c;
      return m;
    case GateKind::I:
      return Eigen::MatrixXcd::Identity(2, 2);
    case GateKind::Z:
      return pauli_matrix(Pauli::Z);
    case GateKind::H:
      m.resize(2, 2);
      m << 1, 1, 1, -1;
      return m / std::sqrt(2.0);
    case GateKind::CZ:
      m = Eigen::MatrixXcd::Identity(4, 4);
      m(3, 3) = -1;
      return m;
  }
  throw std::invalid_argument("gate_unitary: unknown gate kind");
}

TransferMatrix gate_channel(const Gate& g) { return ptm_from_unitary(gate_unitary(g)); }

TransferMatrix projection_channel(const ProjectionAxisSign& p) {
  check_projection(p);
  const Eigen::MatrixXcd projector =
      (pauli_matrix(Pauli::I) + static_cast<double>(p.sign) * pauli_matrix(p.axis)) / 2.0;
  return ptm_from_kraus({projector});
}

TransferMatrix depolarizing_channel(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
  }
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(1, 1) = m(2, 2) = m(3, 3) = 1.0 - p;
  return TransferMatrix(m);
}

namespace {

struct DampingParams {
  double gamma;       // relaxation probability
  double transverse;  // total off-diagonal decay factor
  double pure_z;      // excess dephasing factor beyond sqrt(1-gamma)
};

DampingParams damping_params(double t1, double t2, double duration) {
  if (duration < 0.0) {
    throw std::invalid_argument("damping_channel: duration must be >= 0");
  }
  if (t1 > 0.0 && t2 > 0.0 && t2 > 2.0 * t1) {
    throw std::invalid_argument("damping_channel: t2 > 2*t1 is unphysical");
  }
  DampingParams p{0.0, 1.0, 1.0};
  if (duration == 0.0) return p;
  p.gamma = t1 > 0.0 ? 1.0 - std::exp(-duration / t1) : 0.0;
  const double relax_transverse = std::sqrt(1.0 - p.gamma);
  p.transverse = t2 > 0.0 ? std::exp(-duration / t2) : relax_transverse;
  p.pure_z = relax_transverse > 0.0 ? p.transverse / relax_transverse : 1.0;
  // Guard rounding: t2 = 2*t1 exactly gives pure_z = 1.
  if (p.pure_z > 1.0) p.pure_z = 1.0;
  return p;
}

}  // namespace

TransferMatrix damping_channel(double t1, double t2, double duration) {
  const DampingParams p = damping_params(t1, t2, duration);
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = m(2, 2) = p.transverse;
  m(3, 3) = 1.0 - p.gamma;
  m(3, 0) = p.gamma;
  return TransferMatrix(m);
}

std::vector<Eigen::MatrixXcd> damping_kraus(double t1, double t2, double duration) {
  const DampingParams p = damping_params(t1, t2, duration);
  Eigen::MatrixXcd relax0(2, 2), relax1(2, 2);
  relax0 << 1, 0, 0, std::sqrt(1.0 - p.gamma);
  relax1 << 0, std::sqrt(p.gamma), 0, 0;
  const Eigen::MatrixXcd deph0 =
      std::sqrt((1.0 + p.pure_z) / 2.0) * Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd deph1 =
      std::sqrt((1.0 - p.pure_z) / 2.0) * pauli_matrix(Pauli::Z);
  return {deph0 * relax0, deph0 * relax1, deph1 * relax0, deph1 * relax1};
}

NoiseModel NoiseModel::ideal() { return NoiseModel{}; }

NoiseModel NoiseModel::device_preset() {
  NoiseModel n;
  n.p_gg = 0.9609;
  n.p_ee = 0.9609;
  n.f_init = 0.9895;
  n.t1 = 20.2e-6;
  n.t2 = 3.1e-6;
  n.op_duration = 0.0;
  n.single_qubit_depolarizing = 2.0 * (1.0 - 0.9992);
  return n;
}

void NoiseModel::validate() const {
  check_probability(p_gg, "p_gg");
  check_probability(p_ee, "p_ee");
  check_probability(f_init, "f_init");
  check_probability(single_qubit_depolarizing, "single_qubit_depolarizing");
  if (t1 < 0.0 || t2 < 0.0 || op_duration < 0.0) {
    throw std::invalid_argument("NoiseModel: time constants must be >= 0");
  }
  if (t1 > 0.0 && t2 > 0.0 && t2 > 2.0 * t1) {
    throw std::invalid_argument("NoiseModel: t2 > 2*t1 is unphysical");
  }
}

TransferMatrix conditioned_projection(const NoiseModel& noise, int recorded_sign) {
  if (recorded_sign != 1 && recorded_sign != -1) {
    throw std::invalid_argument("conditioned_projection: sign must be +1 or -1");
  }
  const TransferMatrix plus = projection_channel({Pauli::Z, +1});
  const TransferMatrix minus = projection_channel({Pauli::Z, -1});
  if (recorded_sign == 1) {
    return noise.p_gg * plus + (1.0 - noise.p_ee) * minus;
  }
  return (1.0 - noise.p_gg) * plus + noise.p_ee * minus;
}

Eigen::RowVector4d noisy_z_readout_row(const NoiseModel& noise) {
  return Eigen::RowVector4d(noise.p_gg - noise.p_ee, 0.0, 0.0,
                            noise.p_gg + noise.p_ee - 1.0);
}

std::optional<Gate> preparation_pulse(Fiducial f) {
  constexpr double kHalfPi = 1.5707963267948966;
  switch (f) {
    case Fiducial::Zero: return std::nullopt;
    case Fiducial::One: return rx(2 * kHalfPi);
    case Fiducial::Plus: return ry(-kHalfPi);
    case Fiducial::IPlus: return rx(kHalfPi);
  }
  throw std::invalid_argument("preparation_pulse: invalid fiducial");
}

std::optional<Gate> measurement_prerotation(Pauli basis) {
  constexpr double kHalfPi = 1.5707963267948966;
  switch (basis) {
    case Pauli::I:
    case Pauli::Z:
      return std::nullopt;
    case Pauli::X:
      return ry(kHalfPi);
    case Pauli::Y:
      return rx(-kHalfPi);
  }
  throw std::invalid_argument("measurement_prerotation: invalid basis");
}

}  // namespace vcz
