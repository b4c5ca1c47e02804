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

#include "virtual_gate.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vcz {

namespace {

constexpr double kPi = std::numbers::pi;

void check_operand(const CzOperand& op) {
  if (op.j < 1 || op.j > 5) {
    throw std::invalid_argument("CzOperand: j must be in 1..5");
  }
  if ((op.j == 3) != (op.branch == +1 || op.branch == -1)) {
    throw std::invalid_argument(
        "CzOperand: branch must be +/-1 exactly when j == 3");
  }
}

// Flat index of an operand for gradient bookkeeping: j=3 splits in two.
int operand_index(const CzOperand& op) {
  if (op.j < 3) return op.j - 1;
  if (op.j == 3) return op.branch == +1 ? 2 : 3;
  return op.j;  // j=4 -> 4, j=5 -> 5
}

double operand_value(const std::vector<BranchExpectation>& side,
                     const CzOperand& op) {
  const BranchExpectation& e = side.at(op.j - 1);
  if (op.j != 3) return e.value;
  if (!e.value_minus.has_value()) {
    throw std::invalid_argument(
        "recombine: variant j=3 must carry both measurement branches");
  }
  return op.branch == +1 ? e.value : *e.value_minus;
}

double operand_std_error(const std::vector<BranchExpectation>& side,
                         const CzOperand& op) {
  const BranchExpectation& e = side.at(op.j - 1);
  if (op.j == 3 && op.branch == -1) return e.std_error_minus;
  return e.std_error;
}

}  // namespace

std::vector<CzVariant> cz_decomposition_variants() {
  return {
      {1, Slot::unitary(rz(kPi / 2))},
      {2, Slot::unitary(rz(-kPi / 2))},
      {3, Slot::mid_measure_z()},
      {4, Slot::unitary(gate_i())},
      {5, Slot::unitary(gate_z())},
  };
}

std::vector<CzTerm> cz_recombination_plan() {
  // Expansion of the header identity into bilinear terms.
  return {
      {+0.5, {1, 0}, {1, 0}},
      {+0.5, {2, 0}, {2, 0}},
      {-0.5, {3, +1}, {5, 0}},
      {+0.5, {3, +1}, {4, 0}},
      {+0.5, {3, -1}, {5, 0}},
      {-0.5, {3, -1}, {4, 0}},
      {-0.5, {5, 0}, {3, +1}},
      {+0.5, {4, 0}, {3, +1}},
      {+0.5, {5, 0}, {3, -1}},
      {-0.5, {4, 0}, {3, -1}},
  };
}

CzConstituents CzConstituents::ideal() {
  return CzConstituents{
      gate_channel(rz(kPi / 2)),
      gate_channel(rz(-kPi / 2)),
      projection_channel({Pauli::Z, +1}),
      projection_channel({Pauli::Z, -1}),
      TransferMatrix::identity(1),
      gate_channel(gate_z()),
  };
}

const TransferMatrix& CzConstituents::operand(const CzOperand& op) const {
  check_operand(op);
  switch (op.j) {
    case 1: return rot_plus;
    case 2: return rot_minus;
    case 3: return op.branch == +1 ? proj_plus : proj_minus;
    case 4: return idle;
    default: return flip;
  }
}

TransferMatrix assemble_virtual_ptm(const CzConstituents& a,
                                    const CzConstituents& b) {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(16, 16);
  for (const CzTerm& term : cz_recombination_plan()) {
    total += term.coefficient *
             tensor(a.operand(term.a), b.operand(term.b)).entries();
  }
  return TransferMatrix(total);
}

RecombinedExpectation recombine(const std::vector<BranchExpectation>& a,
                                const std::vector<BranchExpectation>& b) {
  if (a.size() != 5 || b.size() != 5) {
    throw std::invalid_argument(
        "recombine: each side must supply the five variants j = 1..5");
  }
  double value = 0.0;
  // Gradient of the value w.r.t. the six operands per side.
  std::array<double, 6> grad_a{};
  std::array<double, 6> grad_b{};
  for (const CzTerm& term : cz_recombination_plan()) {
    check_operand(term.a);
    check_operand(term.b);
    const double va = operand_value(a, term.a);
    const double vb = operand_value(b, term.b);
    value += term.coefficient * va * vb;
    grad_a[operand_index(term.a)] += term.coefficient * vb;
    grad_b[operand_index(term.b)] += term.coefficient * va;
  }

  double variance = 0.0;
  const std::array<CzOperand, 6> operands = {
      CzOperand{1, 0}, CzOperand{2, 0}, CzOperand{3, +1},
      CzOperand{3, -1}, CzOperand{4, 0}, CzOperand{5, 0}};
  for (const CzOperand& op : operands) {
    const double ga = grad_a[operand_index(op)];
    const double gb = grad_b[operand_index(op)];
    const double sa = operand_std_error(a, op);
    const double sb = operand_std_error(b, op);
    variance += ga * ga * sa * sa + gb * gb * sb * sb;
  }
  return {value, std::sqrt(variance)};
}

SubCircuitSpec make_side_spec(const CzSideTemplate& side, Slot slot) {
  SubCircuitSpec spec;
  spec.input = side.input;
  spec.pre = side.pre;
  spec.slot = std::move(slot);
  spec.post = side.post;
  spec.observable = side.observable;
  return spec;
}

std::vector<BranchExpectation> run_side_exact(const CzSideTemplate& side,
                                              const NoiseModel& noise) {
  std::vector<BranchExpectation> out;
  out.reserve(5);
  for (const CzVariant& variant : cz_decomposition_variants()) {
    out.push_back(run_exact(make_side_spec(side, variant.slot), noise));
  }
  return out;
}

StreamKey side_variant_key(const StreamKey& base, int j) {
  StreamKey variant_key = base;
  variant_key.circuit = splitmix64(base.circuit ^ static_cast<std::uint64_t>(j));
  return variant_key;
}

std::vector<BranchExpectation> run_side_shots(const CzSideTemplate& side,
                                              const NoiseModel& noise,
                                              long long n_shots,
                                              const StreamKey& key) {
  std::vector<BranchExpectation> out;
  out.reserve(5);
  for (const CzVariant& variant : cz_decomposition_variants()) {
    out.push_back(run_shots(make_side_spec(side, variant.slot), noise, n_shots,
                            side_variant_key(key, variant.j)));
  }
  return out;
}

std::vector<QuasiCircuit> cz_quasiprob_plan() {
  const double p = 1.0 / 6.0;
  return {
      {Slot::unitary(rz(kPi / 2)), Slot::unitary(rz(kPi / 2)), p, +1, false, false},
      {Slot::unitary(rz(-kPi / 2)), Slot::unitary(rz(-kPi / 2)), p, +1, false, false},
      {Slot::mid_measure_z(), Slot::unitary(gate_z()), p, -1, true, false},
      {Slot::mid_measure_z(), Slot::unitary(gate_i()), p, +1, true, false},
      {Slot::unitary(gate_z()), Slot::mid_measure_z(), p, -1, false, true},
      {Slot::unitary(gate_i()), Slot::mid_measure_z(), p, +1, false, true},
  };
}

double cz_quasiprob_gamma() { return 3.0; }

RecombinedExpectation run_quasiprob_sampling(const CzSideTemplate& a,
                                             const CzSideTemplate& b,
                                             const NoiseModel& noise,
                                             long long n_samples,
                                             const StreamKey& key) {
  if (n_samples <= 0) {
    throw std::invalid_argument("run_quasiprob_sampling: n_samples must be > 0");
  }
  const auto plan = cz_quasiprob_plan();
  std::vector<CompiledSubCircuit> side_a;
  std::vector<CompiledSubCircuit> side_b;
  side_a.reserve(plan.size());
  side_b.reserve(plan.size());
  for (const QuasiCircuit& qc : plan) {
    side_a.emplace_back(make_side_spec(a, qc.a), noise);
    side_b.emplace_back(make_side_spec(b, qc.b), noise);
  }
  const double gamma = cz_quasiprob_gamma();

  // Signed sample values are +/- gamma; integer tallies keep the mean exact
  // and independent of any partitioning of the sample range.
  long long signed_sum = 0;
  for (long long s = 0; s < n_samples; ++s) {
    ShotRng rng(key, static_cast<std::uint64_t>(s));
    const std::size_t idx = static_cast<std::size_t>(rng.uniform_int(
        static_cast<std::uint64_t>(plan.size())));
    const QuasiCircuit& qc = plan[idx];
    const ShotOutcome out_a = side_a[idx].run(rng);
    const ShotOutcome out_b = side_b[idx].run(rng);
    int sign = qc.base_sign * out_a.final_outcome * out_b.final_outcome;
    if (qc.sign_from_a_mid) sign *= out_a.mid;
    if (qc.sign_from_b_mid) sign *= out_b.mid;
    signed_sum += sign;
  }

  const double n = static_cast<double>(n_samples);
  const double mean_sign = static_cast<double>(signed_sum) / n;
  RecombinedExpectation result{gamma * mean_sign, 0.0};
  if (n_samples > 1) {
    // Each sample is +/- gamma, so the second moment is gamma^2 exactly.
    const double variance =
        gamma * gamma * (1.0 - mean_sign * mean_sign) * n / (n - 1.0);
    result.std_error = std::sqrt(variance / n);
  }
  return result;
}

}  // namespace vcz
