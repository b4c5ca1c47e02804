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

#include "tomography.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "executor.hpp"

namespace vcz {

namespace {

// One tomography circuit: preparation index, measured observable, and for
// mid-measured slots which table row the identity-observable run fills.
struct TomoJob {
  int prep;
  Pauli observable;
};

SubCircuitSpec tomo_spec(int prep, const ChannelCircuit& circuit, Pauli obs) {
  SubCircuitSpec spec;
  spec.input = static_cast<Fiducial>(prep);
  spec.pre = circuit.pre;
  spec.slot = circuit.slot;
  spec.post = circuit.post;
  spec.observable = obs;
  return spec;
}

bool is_mid(const ChannelCircuit& circuit) {
  return circuit.slot && circuit.slot->kind == Slot::Kind::MidMeasureZ;
}

std::vector<TomoJob> tomo_jobs(bool mid_slot) {
  std::vector<TomoJob> jobs;
  for (int prep = 0; prep < 4; ++prep) {
    for (const Pauli obs : {Pauli::X, Pauli::Y, Pauli::Z}) {
      jobs.push_back({prep, obs});
    }
    // The identity row is analytic (+1) except for mid-measured slots,
    // where it is the recorded branch fraction and must be measured.
    if (mid_slot) jobs.push_back({prep, Pauli::I});
  }
  return jobs;
}

QptTables tables_from_results(bool mid, const std::vector<TomoJob>& jobs,
                              const std::vector<BranchExpectation>& results) {
  QptTables tables;
  if (mid) tables.minus = Eigen::Matrix4d::Zero();
  tables.main.row(0).setOnes();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const int row = static_cast<int>(jobs[i].observable);
    tables.main(row, jobs[i].prep) = results[i].value;
    if (mid) (*tables.minus)(row, jobs[i].prep) = *results[i].value_minus;
    tables.total_shots += results[i].n_shots_used;
    // The discard rate is discarded / (discarded + accepted); recover the
    // integer count it was computed from.
    const double rate = results[i].postselection_discard_rate;
    if (rate > 0.0 && rate < 1.0) {
      tables.postselection_resamples += std::llround(
          rate / (1.0 - rate) * static_cast<double>(results[i].n_shots_used));
    }
  }
  return tables;
}

StreamKey job_key(const StreamKey& base, const TomoJob& job) {
  StreamKey key = base;
  key.circuit = splitmix64(base.circuit ^
                           static_cast<std::uint64_t>(job.prep * 4 +
                                                      static_cast<int>(job.observable) + 1));
  return key;
}

}  // namespace

Eigen::Matrix4d ideal_state_prep_matrix() {
  Eigen::Matrix4d a;
  // Columns: zero, one, plus, i_plus.
  a << 1, 1, 1, 1,
       0, 0, 1, 0,
       0, 0, 0, 1,
       1, -1, 0, 0;
  return a;
}

PauliState qst_from_expectations(double x, double y, double z) {
  return PauliState::bloch(x, y, z);
}

LinearInversionResult qpt_linear_inversion(const Eigen::Matrix4d& measured) {
  const Eigen::Matrix4d a = ideal_state_prep_matrix();
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(a);
  const double condition =
      svd.singularValues()(0) / svd.singularValues()(3);
  return {TransferMatrix(measured * a.inverse()), condition};
}

Eigen::Matrix4d measurement_error_matrix(const Eigen::Matrix4d& gram) {
  return gram * ideal_state_prep_matrix().inverse();
}

Eigen::Matrix4d apply_measurement_mitigation(const Eigen::Matrix4d& table,
                                             const Eigen::Matrix4d& b) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(b);
  if (!lu.isInvertible()) {
    throw std::invalid_argument(
        "measurement mitigation: effective measurement matrix is singular");
  }
  return lu.solve(table);
}

double average_gate_fidelity(const TransferMatrix& channel,
                             const TransferMatrix& target) {
  if (channel.n_qubits() != target.n_qubits()) {
    throw std::invalid_argument(
        "average_gate_fidelity: dimension mismatch between channel and target");
  }
  const double d = std::pow(2.0, channel.n_qubits());
  const double overlap =
      (target.entries().transpose() * channel.entries()).trace();
  return (overlap / d + 1.0) / (d + 1.0);
}

QptTables measure_qpt_tables_exact(const ChannelCircuit& circuit,
                                   const NoiseModel& noise) {
  const bool mid = is_mid(circuit);
  const auto jobs = tomo_jobs(mid);
  std::vector<BranchExpectation> results(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    results[i] =
        run_exact(tomo_spec(jobs[i].prep, circuit, jobs[i].observable), noise);
  }
  return tables_from_results(mid, jobs, results);
}

QptTables measure_qpt_tables_exact(const std::optional<Slot>& slot,
                                   const NoiseModel& noise) {
  return measure_qpt_tables_exact(ChannelCircuit{{}, slot, {}}, noise);
}

QptTables measure_qpt_tables_shots(const ChannelCircuit& circuit,
                                   const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers) {
  const bool mid = is_mid(circuit);
  const auto jobs = tomo_jobs(mid);
  std::vector<BranchExpectation> results(jobs.size());
  run_jobs(jobs.size(), workers, [&](std::size_t i) {
    results[i] = run_shots(tomo_spec(jobs[i].prep, circuit, jobs[i].observable),
                           noise, n_shots, job_key(key, jobs[i]));
  });
  return tables_from_results(mid, jobs, results);
}

QptTables measure_qpt_tables_shots(const std::optional<Slot>& slot,
                                   const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers) {
  return measure_qpt_tables_shots(ChannelCircuit{{}, slot, {}}, noise, n_shots,
                                  key, workers);
}

Eigen::Matrix4d measure_gram_exact(const NoiseModel& noise) {
  return measure_qpt_tables_exact(std::nullopt, noise).main;
}

Eigen::Matrix4d measure_gram_shots(const NoiseModel& noise, long long n_shots,
                                   const StreamKey& key, int workers) {
  return measure_qpt_tables_shots(std::nullopt, noise, n_shots, key, workers).main;
}

namespace {

StreamKey variant_key(const StreamKey& base, int j) {
  StreamKey key = base;
  key.circuit = splitmix64(base.circuit ^ (static_cast<std::uint64_t>(j) << 32));
  return key;
}

}  // namespace

ConstituentTables measure_side_constituents_exact(const NoiseModel& noise) {
  const auto variants = cz_decomposition_variants();
  ConstituentTables tables;
  tables.rot_plus = measure_qpt_tables_exact(variants[0].slot, noise);
  tables.rot_minus = measure_qpt_tables_exact(variants[1].slot, noise);
  tables.mid = measure_qpt_tables_exact(variants[2].slot, noise);
  tables.idle = measure_qpt_tables_exact(variants[3].slot, noise);
  tables.flip = measure_qpt_tables_exact(variants[4].slot, noise);
  return tables;
}

ConstituentTables measure_side_constituents_shots(const NoiseModel& noise,
                                                  long long n_shots,
                                                  const StreamKey& key,
                                                  int workers) {
  const auto variants = cz_decomposition_variants();
  ConstituentTables tables;
  tables.rot_plus = measure_qpt_tables_shots(variants[0].slot, noise, n_shots,
                                             variant_key(key, 1), workers);
  tables.rot_minus = measure_qpt_tables_shots(variants[1].slot, noise, n_shots,
                                              variant_key(key, 2), workers);
  tables.mid = measure_qpt_tables_shots(variants[2].slot, noise, n_shots,
                                        variant_key(key, 3), workers);
  tables.idle = measure_qpt_tables_shots(variants[3].slot, noise, n_shots,
                                         variant_key(key, 4), workers);
  tables.flip = measure_qpt_tables_shots(variants[4].slot, noise, n_shots,
                                         variant_key(key, 5), workers);
  return tables;
}

CzConstituents invert_constituents(
    const ConstituentTables& tables,
    const std::optional<Eigen::Matrix4d>& measurement_error) {
  const auto invert = [&](const Eigen::Matrix4d& table) {
    const Eigen::Matrix4d effective =
        measurement_error ? apply_measurement_mitigation(table, *measurement_error)
                          : table;
    return qpt_linear_inversion(effective).transfer;
  };
  if (!tables.mid.minus) {
    throw std::invalid_argument(
        "invert_constituents: mid-measured variant must carry both branches");
  }
  return CzConstituents{
      invert(tables.rot_plus.main), invert(tables.rot_minus.main),
      invert(tables.mid.main),      invert(*tables.mid.minus),
      invert(tables.idle.main),     invert(tables.flip.main),
  };
}

double assignment_fidelity(const NoiseModel& noise) {
  return 0.5 * (noise.p_gg + noise.p_ee);
}

AssignmentEstimate estimate_assignment_fidelity(const NoiseModel& noise,
                                                long long shots_per_state,
                                                const StreamKey& key) {
  if (shots_per_state <= 0) {
    throw std::invalid_argument(
        "estimate_assignment_fidelity: shots_per_state must be > 0");
  }
  long long agree_ground = 0;
  long long agree_excited = 0;
  AssignmentEstimate est;
  for (const Fiducial prep : {Fiducial::Zero, Fiducial::One}) {
    SubCircuitSpec spec;
    spec.input = prep;
    spec.observable = Pauli::Z;
    StreamKey prep_key = key;
    prep_key.circuit =
        splitmix64(key.circuit ^ (prep == Fiducial::Zero ? 1ULL : 2ULL));
    std::vector<ShotRecord> records;
    run_shots(spec, noise, shots_per_state, prep_key, &records);
    for (const ShotRecord& r : records) {
      if (r.true_final == +1) {
        ++est.n_ground;
        if (r.final_outcome == +1) ++agree_ground;
      } else if (r.true_final == -1) {
        ++est.n_excited;
        if (r.final_outcome == -1) ++agree_excited;
      }
    }
  }
  if (est.n_ground == 0 || est.n_excited == 0) {
    throw std::runtime_error(
        "estimate_assignment_fidelity: a true-state tally is empty");
  }
  est.p_gg = static_cast<double>(agree_ground) / static_cast<double>(est.n_ground);
  est.p_ee = static_cast<double>(agree_excited) / static_cast<double>(est.n_excited);
  est.value = 0.5 * (est.p_gg + est.p_ee);
  return est;
}

}  // namespace vcz
