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

/// @file subcircuit.hpp
/// Single-qubit sub-circuit execution: prepare a fiducial state, apply
/// U_pre, the decomposition slot (a gate, a mid-circuit Z measurement, or an
/// explicit channel), U_post, and measure one Pauli observable.
///
/// Two engines share the same noise semantics:
///   run_exact  — propagates the Pauli coefficient vector through channels;
///   run_shots  — Monte-Carlo per-shot trajectories with measurement
///                collapse, initialization post-selection, stochastic Pauli
///                noise and readout confusion.
///
/// Modeling conventions (mirrored by both engines):
///   * State preparation is treated as ideal: the fiducial rotation itself is
///     noise-free, matching the ideal state-preparation matrix assumed by the
///     tomography layer.  Shot mode still models imperfect initialization
///     (f_init) with post-selection on the init measurement record.
///   * RZ, Z and I are software frame updates and never acquire pulse noise;
///     RX, RY, H are physical pulses followed by depolarizing when enabled.
///   * When op_duration > 0, amplitude/phase damping acts once after every
///     circuit slot (each pre/post gate and the decomposition slot).
///   * Readout: Born-sample the Z outcome (after the observable's
///     pre-rotation pulse), then flip the recorded label per the confusion
///     probabilities.  Observable I performs no readout and is +1 by
///     definition; for mid-measurement slots its branch values carry the
///     recorded-outcome probabilities.

#pragma once

#include "channels.hpp"
#include "rng.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace vcz {

/// The operation placed in the cut slot.
struct Slot {
  enum class Kind { Unitary, MidMeasureZ, Channel };

  Kind kind = Kind::Unitary;
  Gate gate = gate_i();                    // Kind::Unitary
  std::optional<TransferMatrix> channel;   // Kind::Channel (exact mode only)

  static Slot unitary(const Gate& g) { return Slot{Kind::Unitary, g, std::nullopt}; }
  static Slot mid_measure_z() { return Slot{Kind::MidMeasureZ, gate_i(), std::nullopt}; }
  static Slot explicit_channel(TransferMatrix t);
};

struct SubCircuitSpec {
  std::variant<Fiducial, PauliState> input = Fiducial::Zero;
  std::vector<Gate> pre;     // U_pre
  std::optional<Slot> slot;  // absent for prepare-and-measure circuits
  std::vector<Gate> post;    // U_post
  Pauli observable = Pauli::Z;
};

/// Result of one sub-circuit evaluation.  For mid-measurement slots, `value`
/// is the unnormalized recorded-(+) branch expectation nu_{+3} and
/// `value_minus` the recorded-(-) branch nu_{-3}; otherwise value_minus is
/// absent.
struct BranchExpectation {
  int j = 0;  // decomposition index 1..5 when part of a plan, else 0
  double value = 0.0;
  std::optional<double> value_minus;
  long long n_shots_used = 0;
  double std_error = 0.0;
  double std_error_minus = 0.0;
  double postselection_discard_rate = 0.0;
};

struct ShotRecord {
  long long repetition = 0;
  long long shot = 0;
  bool postselected = false;  // true if init attempts were discarded
  int mid_outcome = 0;        // recorded mid-circuit outcome (0 = no mid measurement)
  int final_outcome = +1;     // recorded final outcome
  int true_final = 0;         // pre-confusion readout collapse (0 = no readout)
  std::uint64_t rng_stream_id = 0;
};

/// Exact expectation propagation.  std_error = 0; initialization is ideal.
/// Throws std::invalid_argument on malformed specs (two-qubit gates in the
/// lists, channel slot of wrong dimension).
BranchExpectation run_exact(const SubCircuitSpec& spec, const NoiseModel& noise);

/// Monte-Carlo estimate from n_shots accepted shots.  Discarded
/// initialization shots are resampled (and counted in the discard rate).
/// Deterministic in (spec, noise, n_shots, key).  Requires a fiducial input
/// and a gate or mid-measurement slot.  `dump`, when non-null, receives one
/// record per accepted shot.
BranchExpectation run_shots(const SubCircuitSpec& spec, const NoiseModel& noise,
                            long long n_shots, const StreamKey& key,
                            std::vector<ShotRecord>* dump = nullptr);

/// One sampled trajectory; used by the quasi-probability sampler.
struct ShotOutcome {
  int mid = 0;              // recorded mid outcome, 0 when no mid measurement
  int final_outcome = +1;   // recorded final outcome (+1 for observable I)
  int true_final = 0;       // readout collapse before confusion (0 = no readout)
  int discarded_attempts = 0;  // init attempts rejected by post-selection
  bool resampled() const { return discarded_attempts > 0; }
};

/// A sub-circuit compiled to a flat trajectory program; reused across shots.
class CompiledSubCircuit {
 public:
  CompiledSubCircuit(const SubCircuitSpec& spec, const NoiseModel& noise);

  ShotOutcome run(ShotRng& rng) const;
  bool has_mid_measurement() const { return has_mid_; }

 private:
  enum class StepKind { Rotate, Depolarize, Damp, MidMeasure, Readout };
  struct Step {
    StepKind kind;
    Eigen::Matrix3d rotation;  // StepKind::Rotate only
  };

  std::vector<Step> steps_;
  std::optional<Eigen::Matrix3d> prep_rotation_;
  std::vector<Eigen::Matrix4d> damping_branches_;
  double depolarizing_ = 0.0;
  double f_init_ = 1.0;
  double p_gg_ = 1.0;
  double p_ee_ = 1.0;
  bool has_mid_ = false;
};

ShotOutcome run_single_shot(const SubCircuitSpec& spec, const NoiseModel& noise,
                            ShotRng& rng);

/// Mean and standard error (sample standard deviation / sqrt(n), Bessel
/// corrected) computed with pairwise summation so the result is independent
/// of accumulation order.  Throws std::invalid_argument on empty input;
/// n = 1 yields std_error 0.
std::pair<double, double> estimate_moments(std::span<const double> values);

}  // namespace vcz
