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

#include "pec.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "executor.hpp"

namespace vcz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kConditionLimit = 1e8;

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Embeds a basis op into a projection sub-circuit, replacing its slot.
SubCircuitSpec embed_op(const SubCircuitSpec& spec,
                        const ProjectionOpRealization& real, Pauli setting) {
  SubCircuitSpec out;
  out.input = spec.input;
  out.pre = spec.pre;
  out.pre.insert(out.pre.end(), real.circuit.pre.begin(), real.circuit.pre.end());
  out.slot = real.circuit.slot;
  out.post = real.circuit.post;
  out.post.insert(out.post.end(), spec.post.begin(), spec.post.end());
  out.observable = setting;
  return out;
}

double branch_value(const BranchExpectation& r, int branch) {
  if (branch == 0) return r.value;
  if (!r.value_minus.has_value()) {
    throw std::logic_error("projection op circuit did not fork");
  }
  return branch == +1 ? r.value : *r.value_minus;
}

double branch_std_error(const BranchExpectation& r, int branch) {
  return branch == -1 ? r.std_error_minus : r.std_error;
}

void check_sequential_spec(const SubCircuitSpec& spec) {
  if (!spec.slot || spec.slot->kind != Slot::Kind::MidMeasureZ) {
    throw std::invalid_argument(
        "sequential mitigation: the sub-circuit's slot must be the "
        "mid-circuit measurement being replaced");
  }
}

std::uint64_t mix_circuit(std::uint64_t base, std::uint64_t salt) {
  return splitmix64(base ^ salt);
}

}  // namespace

QuasiProbability make_quasi_probability(std::string target,
                                        Eigen::VectorXd coeffs) {
  QuasiProbability q;
  q.target = std::move(target);
  q.gamma = coeffs.lpNorm<1>();
  q.probs = Eigen::VectorXd::Zero(coeffs.size());
  q.weights = Eigen::VectorXd::Zero(coeffs.size());
  if (q.gamma > 0.0) {
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
      q.probs(i) = std::abs(coeffs(i)) / q.gamma;
      q.weights(i) = sign_of(coeffs(i)) * q.gamma;
    }
  }
  q.coeffs = std::move(coeffs);
  return q;
}

QuasiProbability quasi_prob_vector(Pauli k, const Eigen::Matrix4d& b) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(b);
  const double smin = svd.singularValues()(3);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > kConditionLimit) {
    throw std::invalid_argument(
        "quasi_prob_vector: measurement matrix is singular or "
        "ill-conditioned (condition number " +
        std::to_string(smin > 0.0 ? smax / smin
                                  : std::numeric_limits<double>::infinity()) +
        ")");
  }
  Eigen::Vector4d e = Eigen::Vector4d::Zero();
  e(static_cast<int>(k)) = 1.0;
  // q^T = e_k^T B^{-1}  <=>  B^T q = e_k.
  const Eigen::Vector4d q = b.transpose().fullPivLu().solve(e);
  return make_quasi_probability(std::string("sigma_") + pauli_name(k), q);
}

double mitigate_measurement(const Eigen::Vector4d& raw,
                            const QuasiProbability& q) {
  if (q.coeffs.size() != 4) {
    throw std::invalid_argument(
        "mitigate_measurement: quasi-probability must cover the four "
        "measurement settings");
  }
  return q.coeffs.dot(raw);
}

BranchExpectation mitigate_measurement_sampled(const SubCircuitSpec& spec,
                                               const NoiseModel& noise,
                                               const Eigen::Matrix4d& b,
                                               long long n_samples,
                                               const StreamKey& key) {
  if (n_samples <= 0) {
    throw std::invalid_argument(
        "mitigate_measurement_sampled: n_samples must be > 0");
  }
  const QuasiProbability q = quasi_prob_vector(spec.observable, b);

  std::vector<CompiledSubCircuit> settings;
  settings.reserve(4);
  for (int l = 0; l < 4; ++l) {
    SubCircuitSpec setting_spec = spec;
    setting_spec.observable = static_cast<Pauli>(l);
    settings.emplace_back(setting_spec, noise);
  }
  const bool forked = settings.front().has_mid_measurement();

  double sum = 0.0, sum_sq = 0.0;
  double sum_minus = 0.0, sum_sq_minus = 0.0;
  long long discarded = 0;
  for (long long s = 0; s < n_samples; ++s) {
    ShotRng rng(key, static_cast<std::uint64_t>(s));
    const double u = rng.uniform();
    int l = 0;
    double cumulative = 0.0;
    for (int i = 0; i < 4; ++i) {
      cumulative += q.probs(i);
      l = i;
      if (u < cumulative) break;
    }
    const ShotOutcome out = settings[static_cast<std::size_t>(l)].run(rng);
    discarded += out.discarded_attempts;
    const double w = q.weights(l) * static_cast<double>(out.final_outcome);
    if (forked) {
      const double vp = out.mid == +1 ? w : 0.0;
      const double vm = out.mid == -1 ? w : 0.0;
      sum += vp;
      sum_sq += vp * vp;
      sum_minus += vm;
      sum_sq_minus += vm * vm;
    } else {
      sum += w;
      sum_sq += w * w;
    }
  }

  const double n = static_cast<double>(n_samples);
  const auto stats = [&](double total, double total_sq) {
    const double mean = total / n;
    double se = 0.0;
    if (n_samples > 1) {
      const double var = (total_sq - n * mean * mean) / (n - 1.0);
      se = std::sqrt(std::max(var, 0.0) / n);
    }
    return std::make_pair(mean, se);
  };

  BranchExpectation outp;
  outp.n_shots_used = n_samples;
  outp.postselection_discard_rate =
      static_cast<double>(discarded) / static_cast<double>(discarded + n_samples);
  const auto [v, se] = stats(sum, sum_sq);
  outp.value = v;
  outp.std_error = se;
  if (forked) {
    const auto [vm, sem] = stats(sum_minus, sum_sq_minus);
    outp.value_minus = vm;
    outp.std_error_minus = sem;
  }
  return outp;
}

const char* projection_op_name(ProjectionOp op) {
  switch (op) {
    case ProjectionOp::Idle: return "idle";
    case ProjectionOp::PlusX: return "proj_plus_x";
    case ProjectionOp::MinusX: return "proj_minus_x";
    case ProjectionOp::PlusY: return "proj_plus_y";
    case ProjectionOp::MinusY: return "proj_minus_y";
    case ProjectionOp::PlusZ: return "proj_plus_z";
    default: return "proj_minus_z";
  }
}

ProjectionOpRealization projection_op_realization(ProjectionOp op) {
  switch (op) {
    case ProjectionOp::Idle:
      return {ChannelCircuit{{}, Slot::unitary(gate_i()), {}}, 0};
    case ProjectionOp::PlusX:
      return {ChannelCircuit{{ry(kPi / 2)}, Slot::mid_measure_z(), {ry(-kPi / 2)}},
              +1};
    case ProjectionOp::MinusX:
      return {ChannelCircuit{{ry(kPi / 2)}, Slot::mid_measure_z(), {ry(-kPi / 2)}},
              -1};
    case ProjectionOp::PlusY:
      return {ChannelCircuit{{rx(-kPi / 2)}, Slot::mid_measure_z(), {rx(kPi / 2)}},
              +1};
    case ProjectionOp::MinusY:
      return {ChannelCircuit{{rx(-kPi / 2)}, Slot::mid_measure_z(), {rx(kPi / 2)}},
              -1};
    case ProjectionOp::PlusZ:
      return {ChannelCircuit{{}, Slot::mid_measure_z(), {}}, +1};
    default:
      return {ChannelCircuit{{}, Slot::mid_measure_z(), {}}, -1};
  }
}

std::array<TransferMatrix, kProjectionBasisSize> ideal_projection_ops() {
  return {
      TransferMatrix::identity(1),
      projection_channel({Pauli::X, +1}),
      projection_channel({Pauli::X, -1}),
      projection_channel({Pauli::Y, +1}),
      projection_channel({Pauli::Y, -1}),
      projection_channel({Pauli::Z, +1}),
      projection_channel({Pauli::Z, -1}),
  };
}

ProjectionFit fit_projection_quasiprob(
    const std::array<TransferMatrix, kProjectionBasisSize>& basis,
    const TransferMatrix& target) {
  Eigen::MatrixXd m(16, kProjectionBasisSize);
  for (int u = 0; u < kProjectionBasisSize; ++u) {
    m.col(u) = Eigen::Map<const Eigen::VectorXd>(
        basis[static_cast<std::size_t>(u)].entries().data(), 16);
  }
  const Eigen::VectorXd t =
      Eigen::Map<const Eigen::VectorXd>(target.entries().data(), 16);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  int rank = 0;
  Eigen::VectorXd inv_sv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      inv_sv(i) = 1.0 / sv(i);
      ++rank;
    }
  }
  const Eigen::VectorXd c =
      svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose() * t;

  ProjectionFit fit;
  fit.coefficients = c;
  fit.residual = (m * c - t).norm();
  fit.rank = rank;
  fit.gamma = c.lpNorm<1>();
  return fit;
}

namespace {

ProjectionBasis finish_basis(std::array<TransferMatrix, kProjectionBasisSize> ops) {
  ProjectionFit gamma =
      fit_projection_quasiprob(ops, projection_channel({Pauli::Z, +1}));
  ProjectionFit delta =
      fit_projection_quasiprob(ops, projection_channel({Pauli::Z, -1}));
  return ProjectionBasis{std::move(ops), std::move(gamma), std::move(delta)};
}

}  // namespace

ProjectionBasis characterize_projection_basis_exact(
    const NoiseModel& noise, const Eigen::Matrix4d& measurement_error) {
  const auto invert = [&](const Eigen::Matrix4d& table) {
    return qpt_linear_inversion(
               apply_measurement_mitigation(table, measurement_error))
        .transfer;
  };
  std::array<TransferMatrix, kProjectionBasisSize> ops = ideal_projection_ops();
  const auto idle_tables = measure_qpt_tables_exact(
      projection_op_realization(ProjectionOp::Idle).circuit, noise);
  ops[0] = invert(idle_tables.main);
  const std::array<ProjectionOp, 3> plus_ops = {
      ProjectionOp::PlusX, ProjectionOp::PlusY, ProjectionOp::PlusZ};
  for (int family = 0; family < 3; ++family) {
    const auto tables = measure_qpt_tables_exact(
        projection_op_realization(plus_ops[static_cast<std::size_t>(family)])
            .circuit,
        noise);
    ops[static_cast<std::size_t>(1 + 2 * family)] = invert(tables.main);
    ops[static_cast<std::size_t>(2 + 2 * family)] = invert(*tables.minus);
  }
  return finish_basis(std::move(ops));
}

ProjectionBasis characterize_projection_basis_shots(
    const NoiseModel& noise, const Eigen::Matrix4d& measurement_error,
    long long n_shots, const StreamKey& key, int workers) {
  const auto invert = [&](const Eigen::Matrix4d& table) {
    return qpt_linear_inversion(
               apply_measurement_mitigation(table, measurement_error))
        .transfer;
  };
  std::array<TransferMatrix, kProjectionBasisSize> ops = ideal_projection_ops();
  StreamKey idle_key = key;
  idle_key.circuit = mix_circuit(key.circuit, 0x70ULL);
  const auto idle_tables = measure_qpt_tables_shots(
      projection_op_realization(ProjectionOp::Idle).circuit, noise, n_shots,
      idle_key, workers);
  ops[0] = invert(idle_tables.main);
  const std::array<ProjectionOp, 3> plus_ops = {
      ProjectionOp::PlusX, ProjectionOp::PlusY, ProjectionOp::PlusZ};
  for (int family = 0; family < 3; ++family) {
    StreamKey family_key = key;
    family_key.circuit =
        mix_circuit(key.circuit, 0x71ULL + static_cast<std::uint64_t>(family));
    const auto tables = measure_qpt_tables_shots(
        projection_op_realization(plus_ops[static_cast<std::size_t>(family)])
            .circuit,
        noise, n_shots, family_key, workers);
    ops[static_cast<std::size_t>(1 + 2 * family)] = invert(tables.main);
    ops[static_cast<std::size_t>(2 + 2 * family)] = invert(*tables.minus);
  }
  return finish_basis(std::move(ops));
}

CzConstituents apply_projection_mitigation(const CzConstituents& measured,
                                           const ProjectionBasis& basis) {
  const auto combine = [&](const ProjectionFit& fit) {
    Eigen::Matrix4d total = Eigen::Matrix4d::Zero();
    for (int u = 0; u < kProjectionBasisSize; ++u) {
      total += fit.coefficients(u) *
               basis.ops[static_cast<std::size_t>(u)].entries();
    }
    return TransferMatrix(total);
  };
  CzConstituents out = measured;
  out.proj_plus = combine(basis.gamma_fit);
  out.proj_minus = combine(basis.delta_fit);
  return out;
}

SequentialResult sequential_mitigated_expectation_exact(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b) {
  check_sequential_spec(spec);
  const QuasiProbability q = quasi_prob_vector(spec.observable, b);
  SequentialResult result;
  result.gamma = q.gamma * fit.gamma;
  for (int u = 0; u < kProjectionBasisSize; ++u) {
    const double cu = fit.coefficients(u);
    if (cu == 0.0) continue;
    const auto real = projection_op_realization(static_cast<ProjectionOp>(u));
    for (int l = 0; l < 4; ++l) {
      const double ql = q.coeffs(l);
      if (ql == 0.0) continue;
      const auto r =
          run_exact(embed_op(spec, real, static_cast<Pauli>(l)), noise);
      result.value += ql * cu * branch_value(r, real.branch);
    }
  }
  return result;
}

SequentialResult sequential_mitigated_expectation_shots(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b, long long n_shots,
    const StreamKey& key, int workers) {
  check_sequential_spec(spec);
  const QuasiProbability q = quasi_prob_vector(spec.observable, b);

  struct Term {
    int u;
    int l;
    double weight;
  };
  std::vector<Term> terms;
  for (int u = 0; u < kProjectionBasisSize; ++u) {
    for (int l = 0; l < 4; ++l) {
      const double w = fit.coefficients(u) * q.coeffs(l);
      if (w != 0.0) terms.push_back({u, l, w});
    }
  }

  std::vector<BranchExpectation> results(terms.size());
  run_jobs(terms.size(), workers, [&](std::size_t i) {
    const auto real =
        projection_op_realization(static_cast<ProjectionOp>(terms[i].u));
    StreamKey term_key = key;
    term_key.circuit = mix_circuit(
        key.circuit, 0x100ULL + static_cast<std::uint64_t>(terms[i].u * 4 +
                                                           terms[i].l));
    results[i] = run_shots(
        embed_op(spec, real, static_cast<Pauli>(terms[i].l)), noise, n_shots,
        term_key);
  });

  SequentialResult out;
  out.gamma = q.gamma * fit.gamma;
  double variance = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto real =
        projection_op_realization(static_cast<ProjectionOp>(terms[i].u));
    out.value += terms[i].weight * branch_value(results[i], real.branch);
    const double se = branch_std_error(results[i], real.branch);
    variance += terms[i].weight * terms[i].weight * se * se;
    out.shots_used += results[i].n_shots_used;
    const double rate = results[i].postselection_discard_rate;
    if (rate > 0.0 && rate < 1.0) {
      out.postselection_resamples += std::llround(
          rate / (1.0 - rate) * static_cast<double>(results[i].n_shots_used));
    }
  }
  out.std_error = std::sqrt(variance);
  return out;
}

SequentialResult sequential_mitigated_expectation_sampled(
    const SubCircuitSpec& spec, const NoiseModel& noise,
    const ProjectionFit& fit, const Eigen::Matrix4d& b, long long n_samples,
    const StreamKey& key) {
  check_sequential_spec(spec);
  if (n_samples <= 0) {
    throw std::invalid_argument(
        "sequential_mitigated_expectation_sampled: n_samples must be > 0");
  }
  const QuasiProbability q = quasi_prob_vector(spec.observable, b);
  const QuasiProbability qu =
      make_quasi_probability("projection_fit", fit.coefficients);

  // Compile the 28 circuits up front; entry (u, l).
  std::vector<std::vector<CompiledSubCircuit>> compiled;
  std::vector<int> branches;
  compiled.reserve(kProjectionBasisSize);
  for (int u = 0; u < kProjectionBasisSize; ++u) {
    const auto real = projection_op_realization(static_cast<ProjectionOp>(u));
    branches.push_back(real.branch);
    std::vector<CompiledSubCircuit> row;
    row.reserve(4);
    for (int l = 0; l < 4; ++l) {
      row.emplace_back(embed_op(spec, real, static_cast<Pauli>(l)), noise);
    }
    compiled.push_back(std::move(row));
  }

  const auto draw = [](const Eigen::VectorXd& probs, double u) {
    int idx = 0;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      cumulative += probs(i);
      idx = static_cast<int>(i);
      if (u < cumulative) break;
    }
    return idx;
  };

  double sum = 0.0;
  double sum_sq = 0.0;
  long long resamples = 0;
  for (long long s = 0; s < n_samples; ++s) {
    ShotRng rng(key, static_cast<std::uint64_t>(s));
    const int l = draw(q.probs, rng.uniform());
    const int u = draw(qu.probs, rng.uniform());
    const ShotOutcome out =
        compiled[static_cast<std::size_t>(u)][static_cast<std::size_t>(l)].run(
            rng);
    double v = 0.0;
    const int branch = branches[static_cast<std::size_t>(u)];
    if (branch == 0 || out.mid == branch) {
      v = q.weights(l) * qu.weights(u) * static_cast<double>(out.final_outcome);
    }
    sum += v;
    sum_sq += v * v;
    resamples += out.discarded_attempts;
  }

  SequentialResult out;
  out.gamma = q.gamma * qu.gamma;
  const double n = static_cast<double>(n_samples);
  out.value = sum / n;
  if (n_samples > 1) {
    const double var = (sum_sq - n * out.value * out.value) / (n - 1.0);
    out.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  out.shots_used = n_samples;
  out.postselection_resamples = resamples;
  return out;
}

}  // namespace vcz
