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

#include "subcircuit.hpp"

#include <cmath>
#include <stdexcept>

namespace vcz {

namespace {

void check_single_qubit_gates(const std::vector<Gate>& gates, const char* where) {
  for (const auto& g : gates) {
    if (gate_qubit_count(g.kind) != 1) {
      throw std::invalid_argument(std::string("sub-circuit ") + where +
                                  ": only single-qubit gates are allowed");
    }
  }
}

PauliState resolve_input(const SubCircuitSpec& spec) {
  if (std::holds_alternative<Fiducial>(spec.input)) {
    return PauliState::fiducial(std::get<Fiducial>(spec.input));
  }
  const PauliState& s = std::get<PauliState>(spec.input);
  if (s.n_qubits() != 1) {
    throw std::invalid_argument("sub-circuit input must be single-qubit");
  }
  return s;
}

Eigen::Matrix3d bloch_rotation(const Gate& g) {
  return gate_channel(g).entries().block<3, 3>(1, 1);
}

}  // namespace

Slot Slot::explicit_channel(TransferMatrix t) {
  if (t.n_qubits() != 1) {
    throw std::invalid_argument("Slot: explicit channel must be single-qubit");
  }
  Slot s;
  s.kind = Kind::Channel;
  s.channel = std::move(t);
  return s;
}

BranchExpectation run_exact(const SubCircuitSpec& spec, const NoiseModel& noise) {
  noise.validate();
  check_single_qubit_gates(spec.pre, "pre");
  check_single_qubit_gates(spec.post, "post");
  if (spec.slot) {
    if (spec.slot->kind == Slot::Kind::Unitary &&
        gate_qubit_count(spec.slot->gate.kind) != 1) {
      throw std::invalid_argument(
          "sub-circuit slot: only single-qubit gates are allowed");
    }
    if (spec.slot->kind == Slot::Kind::Channel && !spec.slot->channel) {
      throw std::invalid_argument("sub-circuit slot: explicit channel missing");
    }
  }

  std::optional<Eigen::Matrix4d> depol;
  if (noise.depolarizing_enabled()) {
    depol = depolarizing_channel(noise.single_qubit_depolarizing).entries();
  }
  std::optional<Eigen::Matrix4d> damp;
  if (noise.damping_enabled()) {
    damp = damping_channel(noise.t1, noise.t2, noise.op_duration).entries();
  }

  const auto apply_gate = [&](Eigen::Vector4d& w, const Gate& g) {
    w = gate_channel(g).entries() * w;
    if (depol && is_physical_pulse(g)) w = *depol * w;
    if (damp) w = *damp * w;
  };

  Eigen::Vector4d v = resolve_input(spec).coeffs();
  for (const auto& g : spec.pre) apply_gate(v, g);

  bool forked = false;
  Eigen::Vector4d v_plus = v;
  Eigen::Vector4d v_minus = Eigen::Vector4d::Zero();
  if (spec.slot) {
    switch (spec.slot->kind) {
      case Slot::Kind::Unitary:
        apply_gate(v_plus, spec.slot->gate);
        break;
      case Slot::Kind::Channel:
        v_plus = spec.slot->channel->entries() * v_plus;
        if (damp) v_plus = *damp * v_plus;
        break;
      case Slot::Kind::MidMeasureZ:
        forked = true;
        v_plus = conditioned_projection(noise, +1).entries() * v;
        v_minus = conditioned_projection(noise, -1).entries() * v;
        if (damp) {
          v_plus = *damp * v_plus;
          v_minus = *damp * v_minus;
        }
        break;
    }
  }

  for (const auto& g : spec.post) {
    apply_gate(v_plus, g);
    if (forked) apply_gate(v_minus, g);
  }

  const auto measure = [&](Eigen::Vector4d w) -> double {
    if (spec.observable == Pauli::I) return w(0);
    if (const auto pre = measurement_prerotation(spec.observable)) {
      w = gate_channel(*pre).entries() * w;
      if (depol) w = *depol * w;
      if (damp) w = *damp * w;
    }
    return noisy_z_readout_row(noise) * w;
  };

  BranchExpectation out;
  if (forked) {
    out.value = measure(v_plus);
    out.value_minus = measure(v_minus);
  } else if (spec.observable == Pauli::I &&
             (!spec.slot || spec.slot->kind != Slot::Kind::Channel)) {
    out.value = 1.0;  // no readout: +1 by definition for trace-preserving circuits
  } else {
    out.value = measure(v_plus);
  }
  return out;
}

CompiledSubCircuit::CompiledSubCircuit(const SubCircuitSpec& spec,
                                       const NoiseModel& noise) {
  noise.validate();
  check_single_qubit_gates(spec.pre, "pre");
  check_single_qubit_gates(spec.post, "post");
  if (!std::holds_alternative<Fiducial>(spec.input)) {
    throw std::invalid_argument("shot mode requires a fiducial input state");
  }
  if (spec.slot && spec.slot->kind == Slot::Kind::Channel) {
    throw std::invalid_argument("shot mode cannot sample an explicit channel slot");
  }

  f_init_ = noise.f_init;
  p_gg_ = noise.p_gg;
  p_ee_ = noise.p_ee;
  const double accept =
      noise.f_init * noise.p_gg + (1.0 - noise.f_init) * (1.0 - noise.p_ee);
  if (accept < 1e-9) {
    throw std::invalid_argument(
        "initialization post-selection accepts (almost) no shots");
  }

  if (const auto pulse = preparation_pulse(std::get<Fiducial>(spec.input))) {
    prep_rotation_ = bloch_rotation(*pulse);
  }
  if (noise.depolarizing_enabled()) depolarizing_ = noise.single_qubit_depolarizing;
  const bool damping = noise.damping_enabled();
  if (damping) {
    for (const auto& op : damping_kraus(noise.t1, noise.t2, noise.op_duration)) {
      damping_branches_.push_back(ptm_from_kraus({op}).entries());
    }
  }

  const auto push_gate = [&](const Gate& g) {
    steps_.push_back({StepKind::Rotate, bloch_rotation(g)});
    if (depolarizing_ > 0.0 && is_physical_pulse(g)) {
      steps_.push_back({StepKind::Depolarize, Eigen::Matrix3d::Zero()});
    }
    if (damping) steps_.push_back({StepKind::Damp, Eigen::Matrix3d::Zero()});
  };

  for (const auto& g : spec.pre) push_gate(g);
  if (spec.slot) {
    if (spec.slot->kind == Slot::Kind::MidMeasureZ) {
      has_mid_ = true;
      steps_.push_back({StepKind::MidMeasure, Eigen::Matrix3d::Zero()});
      if (damping) steps_.push_back({StepKind::Damp, Eigen::Matrix3d::Zero()});
    } else {
      push_gate(spec.slot->gate);
    }
  }
  for (const auto& g : spec.post) push_gate(g);

  if (spec.observable != Pauli::I) {
    if (const auto pre = measurement_prerotation(spec.observable)) {
      push_gate(*pre);
    }
    steps_.push_back({StepKind::Readout, Eigen::Matrix3d::Zero()});
  }
}

ShotOutcome CompiledSubCircuit::run(ShotRng& rng) const {
  ShotOutcome out;
  const auto record = [&](int true_sign) {
    return true_sign == +1 ? (rng.bernoulli(p_gg_) ? +1 : -1)
                           : (rng.bernoulli(p_ee_) ? -1 : +1);
  };

  // Initialization by measurement with post-selection on a ground record.
  bool ground;
  for (;;) {
    ground = rng.bernoulli(f_init_);
    const bool recorded_ground =
        ground ? rng.bernoulli(p_gg_) : !rng.bernoulli(p_ee_);
    if (recorded_ground) break;
    ++out.discarded_attempts;
  }

  Eigen::Vector3d b(0.0, 0.0, ground ? 1.0 : -1.0);
  if (prep_rotation_) b = *prep_rotation_ * b;

  for (const auto& step : steps_) {
    switch (step.kind) {
      case StepKind::Rotate:
        b = step.rotation * b;
        break;
      case StepKind::Depolarize:
        if (rng.bernoulli(depolarizing_)) {
          switch (rng.uniform_int(4)) {
            case 0: break;                              // I
            case 1: b.y() = -b.y(); b.z() = -b.z(); break;  // X
            case 2: b.x() = -b.x(); b.z() = -b.z(); break;  // Y
            case 3: b.x() = -b.x(); b.y() = -b.y(); break;  // Z
          }
        }
        break;
      case StepKind::Damp: {
        const Eigen::Vector4d w(1.0, b.x(), b.y(), b.z());
        const double u = rng.uniform();
        double cumulative = 0.0;
        Eigen::Vector4d chosen = Eigen::Vector4d::Zero();
        for (const auto& branch : damping_branches_) {
          const Eigen::Vector4d candidate = branch * w;
          if (candidate(0) <= 0.0) continue;
          cumulative += candidate(0);
          chosen = candidate;
          if (u < cumulative) break;
        }
        b = chosen.tail<3>() / chosen(0);
        break;
      }
      case StepKind::MidMeasure: {
        const int true_sign = rng.born_sign(0.5 * (1.0 + b.z()));
        b = Eigen::Vector3d(0.0, 0.0, static_cast<double>(true_sign));
        out.mid = record(true_sign);
        break;
      }
      case StepKind::Readout: {
        const int true_sign = rng.born_sign(0.5 * (1.0 + b.z()));
        out.true_final = true_sign;
        out.final_outcome = record(true_sign);
        break;
      }
    }
  }
  return out;
}

ShotOutcome run_single_shot(const SubCircuitSpec& spec, const NoiseModel& noise,
                            ShotRng& rng) {
  return CompiledSubCircuit(spec, noise).run(rng);
}

BranchExpectation run_shots(const SubCircuitSpec& spec, const NoiseModel& noise,
                            long long n_shots, const StreamKey& key,
                            std::vector<ShotRecord>* dump) {
  if (n_shots < 1) {
    throw std::invalid_argument("run_shots: n_shots must be >= 1");
  }
  const CompiledSubCircuit compiled(spec, noise);

  long long sum_plus = 0;       // outcomes on the recorded-+ branch (or all shots)
  long long sum_minus = 0;      // outcomes on the recorded-- branch
  long long count_plus = 0;     // shots recorded +
  long long discarded = 0;      // init attempts rejected by post-selection

  for (long long s = 0; s < n_shots; ++s) {
    ShotRng rng(key, static_cast<std::uint64_t>(s));
    const std::uint64_t stream_id = rng.stream_id();
    const ShotOutcome shot = compiled.run(rng);
    discarded += shot.discarded_attempts;
    if (compiled.has_mid_measurement() && shot.mid == -1) {
      sum_minus += shot.final_outcome;
    } else {
      sum_plus += shot.final_outcome;
      ++count_plus;
    }
    if (dump) {
      dump->push_back({static_cast<long long>(key.repetition), s, shot.resampled(),
                       shot.mid, shot.final_outcome, shot.true_final, stream_id});
    }
  }

  const double n = static_cast<double>(n_shots);
  const auto branch_stats = [&](long long sum, long long abs_count) {
    const double mean = static_cast<double>(sum) / n;
    double se = 0.0;
    if (n_shots > 1) {
      // Branch values are outcome*indicator in {-1, 0, +1}; the sum of
      // squares is the number of shots landing on the branch.
      const double var =
          (static_cast<double>(abs_count) - n * mean * mean) / (n - 1.0);
      se = std::sqrt(std::max(var, 0.0) / n);
    }
    return std::make_pair(mean, se);
  };

  BranchExpectation out;
  out.n_shots_used = n_shots;
  out.postselection_discard_rate =
      static_cast<double>(discarded) / static_cast<double>(discarded + n_shots);
  if (compiled.has_mid_measurement()) {
    const auto [vp, sp] = branch_stats(sum_plus, count_plus);
    const auto [vm, sm] = branch_stats(sum_minus, n_shots - count_plus);
    out.value = vp;
    out.std_error = sp;
    out.value_minus = vm;
    out.std_error_minus = sm;
  } else {
    const auto [v, se] = branch_stats(sum_plus, n_shots);
    out.value = v;
    out.std_error = se;
  }
  return out;
}

namespace {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double total = 0.0;
    for (const double v : values) total += v;
    return total;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace

std::pair<double, double> estimate_moments(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("estimate_moments: empty input");
  }
  const std::size_t n = values.size();
  const double mean = pairwise_sum(values) / static_cast<double>(n);
  if (n == 1) return {mean, 0.0};
  std::vector<double> squared(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    squared[i] = d * d;
  }
  const double variance = pairwise_sum(squared) / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n))};
}

}  // namespace vcz
