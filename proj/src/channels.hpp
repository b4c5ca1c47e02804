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

/// @file channels.hpp
/// Gate and noise channel library: the rotation/idle/flip gates used by the
/// decomposition circuits, projection channels for mid-circuit measurements,
/// standard noise channels, and the device noise model.

#pragma once

#include "pauli.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vcz {

enum class GateKind { RZ, RX, RY, I, Z, H, CZ };

/// A gate instance; theta is meaningful only for the rotation kinds.
struct Gate {
  GateKind kind = GateKind::I;
  double theta = 0.0;
};

Gate rz(double theta);
Gate rx(double theta);
Gate ry(double theta);
Gate gate_i();
Gate gate_z();
Gate gate_h();
Gate gate_cz();

/// True for pulsed gates (RX, RY, H) that are executed as physical microwave
/// drives and therefore pick up per-pulse noise.  RZ, Z and I are software
/// frame updates and are noise-free; CZ never executes on hardware in this
/// protocol (it exists only in the two-qubit reference model).
bool is_physical_pulse(const Gate& g);

int gate_qubit_count(GateKind kind);

/// Human-readable label, e.g. "RZ(+1.570796)" or "H".
std::string gate_label(const Gate& g);

/// The gate's unitary matrix.  Rotations use R_P(theta) = exp(+i P theta / 2).
/// Throws std::invalid_argument on non-finite theta.
Eigen::MatrixXcd gate_unitary(const Gate& g);

/// The gate's exact transfer matrix (via ptm_from_unitary).
TransferMatrix gate_channel(const Gate& g);

/// Axis/sign label of a projector Pi = (I + sign * sigma_axis) / 2.
struct ProjectionAxisSign {
  Pauli axis = Pauli::Z;  // must be X, Y or Z
  int sign = +1;          // +1 or -1
};

/// Transfer matrix of the non-trace-preserving map rho -> Pi rho Pi.
/// Idempotent; the two signs of one axis sum to the completely dephasing
/// channel along that axis (the unit-trace component is preserved, the two
/// transverse components are erased), which is trace preserving.
TransferMatrix projection_channel(const ProjectionAxisSign& p);

/// diag(1, 1-p, 1-p, 1-p): uniform single-qubit depolarizing with
/// probability p of replacing the state by a uniformly random Pauli frame.
/// Requires p in [0, 1].
TransferMatrix depolarizing_channel(double p);

/// Amplitude-plus-phase damping over `duration`:
///   gamma = 1 - exp(-duration/t1)    (population relaxation toward ground)
///   total transverse decay exp(-duration/t2)
/// t1 <= 0 disables relaxation, t2 <= 0 leaves only the relaxation-induced
/// sqrt(1-gamma) transverse decay, duration <= 0 gives the identity.
/// Throws std::invalid_argument when both times are set and t2 > 2*t1.
TransferMatrix damping_channel(double t1, double t2, double duration);

/// Kraus operators realizing damping_channel (relaxation pair composed with
/// the excess pure-dephasing pair), used for per-shot trajectory sampling.
std::vector<Eigen::MatrixXcd> damping_kraus(double t1, double t2, double duration);

/// Device noise model.  All probabilities default to the ideal values; zero
/// time constants disable damping.  +1 outcomes correspond to ground (g).
struct NoiseModel {
  double p_gg = 1.0;   // P(record g | qubit in g)
  double p_ee = 1.0;   // P(record e | qubit in e)
  double f_init = 1.0; // P(qubit actually in g at the start of a shot)
  double t1 = 0.0;     // relaxation time [s]; 0 disables
  double t2 = 0.0;     // total dephasing time [s]; 0 disables
  double op_duration = 0.0;            // seconds per circuit slot; 0 disables damping
  double single_qubit_depolarizing = 0.0;  // per physical pulse

  static NoiseModel ideal();
  /// Published transmon parameters: symmetric readout confusion with
  /// assignment fidelity 0.9609, initialization fidelity 0.9895,
  /// T1 = 20.2 us, T2 = 3.1 us (damping off until op_duration is set),
  /// and per-pulse depolarizing p = 2*(1 - 0.9992) from the benchmarked
  /// average gate fidelity f = 1 - p/2.
  static NoiseModel device_preset();

  /// Throws std::invalid_argument on out-of-range fields or t2 > 2*t1.
  void validate() const;

  bool ideal_readout() const { return p_gg == 1.0 && p_ee == 1.0; }
  bool damping_enabled() const { return op_duration > 0.0 && (t1 > 0.0 || t2 > 0.0); }
  bool depolarizing_enabled() const { return single_qubit_depolarizing > 0.0; }
};

/// The channel conditioned on the *recorded* mid-circuit outcome:
///   recorded g: Phi_g = p_gg * T(Pi+Z) + (1 - p_ee) * T(Pi-Z)
///   recorded e: Phi_e = (1 - p_gg) * T(Pi+Z) + p_ee * T(Pi-Z)
/// Unnormalized: the trace component of the output is the probability of
/// recording that outcome.  Phi_g + Phi_e is trace preserving.
TransferMatrix conditioned_projection(const NoiseModel& noise, int recorded_sign);

/// Expectation row of a Z measurement read through the confusion channel:
/// (p_gg - p_ee, 0, 0, p_gg + p_ee - 1) acting on (1, x, y, z).
Eigen::RowVector4d noisy_z_readout_row(const NoiseModel& noise);

/// Pulse that maps |0> onto the fiducial state (nothing for "zero").
std::optional<Gate> preparation_pulse(Fiducial f);

/// Pre-rotation mapping the measured axis onto Z: X -> R_Y(pi/2),
/// Y -> R_X(-pi/2), Z and I -> none.
std::optional<Gate> measurement_prerotation(Pauli basis);

}  // namespace vcz
