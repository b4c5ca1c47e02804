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

#include "harness.hpp"

#include "virtual_gate.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace vcz {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Shared plumbing.

void ensure_outputs(const ExperimentConfig& cfg) {
  if (!cfg.outputs.empty()) fs::create_directories(cfg.outputs);
}

void reject_dump_shots(const ExperimentConfig& cfg, const char* command) {
  if (cfg.dump_shots) {
    throw std::invalid_argument(
        std::string("--dump-shots is only supported by the expectation "
                    "command, not \"") +
        command + "\"");
  }
}

double condition_of(const Eigen::Matrix4d& m) {
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m);
  const double smallest = svd.singularValues()(3);
  if (smallest <= 0.0) {
    throw NumericalError("singular calibration matrix");
  }
  return svd.singularValues()(0) / smallest;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

Json stat_to_json(const std::vector<double>& values) {
  const auto [mean, se] = estimate_moments(values);
  Json j;
  j["mean"] = mean;
  j["std_error"] = se;
  return j;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// Shot accounting accumulated over everything a command simulates.  The
// invariant total_shots == circuits * shots_per_circuit holds because every
// circuit runs exactly `shots` accepted shots.
struct Accounting {
  long long circuits = 0;
  long long shots = 0;
  long long resamples = 0;

  void add_tables(const QptTables& t, long long shots_per_circuit) {
    if (shots_per_circuit > 0) circuits += t.total_shots / shots_per_circuit;
    shots += t.total_shots;
    resamples += t.postselection_resamples;
  }
  void add_constituents(const ConstituentTables& t, long long shots_per_circuit) {
    add_tables(t.rot_plus, shots_per_circuit);
    add_tables(t.rot_minus, shots_per_circuit);
    add_tables(t.mid, shots_per_circuit);
    add_tables(t.idle, shots_per_circuit);
    add_tables(t.flip, shots_per_circuit);
  }
  void add_sequential(const SequentialResult& r, long long shots_per_circuit) {
    if (shots_per_circuit > 0) circuits += r.shots_used / shots_per_circuit;
    shots += r.shots_used;
    resamples += r.postselection_resamples;
  }
  void add_branch(const BranchExpectation& r) {
    circuits += 1;
    shots += r.n_shots_used;
    const double rate = r.postselection_discard_rate;
    if (rate > 0.0 && rate < 1.0) {
      resamples += std::llround(rate / (1.0 - rate) *
                                static_cast<double>(r.n_shots_used));
    }
  }

  Json to_json(long long shots_per_circuit) const {
    Json j;
    j["circuits"] = circuits;
    j["shots_per_circuit"] = shots_per_circuit;
    j["total_shots"] = shots;
    j["postselection_resamples"] = resamples;
    return j;
  }
};

const QptTables& variant_tables(const ConstituentTables& t, int j) {
  switch (j) {
    case 1: return t.rot_plus;
    case 2: return t.rot_minus;
    case 3: return t.mid;
    case 4: return t.idle;
    case 5: return t.flip;
  }
  throw std::logic_error("variant index out of range");
}

const char* variant_name(int j) {
  switch (j) {
    case 1: return "rot_plus";
    case 2: return "rot_minus";
    case 3: return "mid_measure";
    case 4: return "idle";
    case 5: return "flip";
  }
  throw std::logic_error("variant index out of range");
}

// ---------------------------------------------------------------------------
// Calibration bundle persistence.

Json quasiprob_to_json(const QuasiProbability& q) {
  Json j;
  j["target"] = q.target;
  j["coefficients"] = vector_to_json(q.coeffs);
  j["probabilities"] = vector_to_json(q.probs);
  j["weights"] = vector_to_json(q.weights);
  j["gamma"] = q.gamma;
  return j;
}

QuasiProbability quasiprob_from_json(const Json& j) {
  QuasiProbability q;
  q.target = j.at("target").get<std::string>();
  q.coeffs = vector_from_json(j.at("coefficients"));
  q.probs = vector_from_json(j.at("probabilities"));
  q.weights = vector_from_json(j.at("weights"));
  q.gamma = j.at("gamma").get<double>();
  return q;
}

Json fit_to_json(const ProjectionFit& fit) {
  Json j;
  j["coefficients"] = vector_to_json(fit.coefficients);
  j["residual"] = fit.residual;
  j["rank"] = fit.rank;
  j["gamma"] = fit.gamma;
  return j;
}

ProjectionFit fit_from_json(const Json& j) {
  ProjectionFit fit;
  fit.coefficients = vector_from_json(j.at("coefficients"));
  fit.residual = j.at("residual").get<double>();
  fit.rank = j.at("rank").get<int>();
  fit.gamma = j.at("gamma").get<double>();
  return fit;
}

// ---------------------------------------------------------------------------
// Bundle acquisition for mitigated commands.

struct AcquiredBundle {
  std::optional<CalibrationBundle> bundle;
  Json reference;  // file name (string) or null
};

AcquiredBundle acquire_bundle(const ExperimentConfig& cfg,
                              const std::optional<fs::path>& bundle_path) {
  if (cfg.mitigation == Mitigation::None) {
    if (bundle_path) {
      throw std::invalid_argument(
          "a calibration bundle is only used when mitigation is enabled");
    }
    return {std::nullopt, Json(nullptr)};
  }
  if (bundle_path) {
    return {calibration_from_json(read_json_file(*bundle_path)),
            Json(bundle_path->filename().string())};
  }
  // Calibrate up front with the same config and seed, and persist the bundle
  // alongside the report.
  CalibrationBundle bundle = run_calibration(cfg);
  write_text_file(cfg.outputs / "calibration.json",
                  dump_json_17(calibration_to_json(cfg, bundle)));
  return {std::move(bundle), Json("calibration.json")};
}

// ---------------------------------------------------------------------------
// Side measurement shared by the QPT commands.

struct SideMeasurement {
  ConstituentTables tables;          // raw tomography tables
  std::optional<QptTables> pec_mid;  // sequentially mitigated mid tables
};

// Mitigated mid-measurement tables: every (preparation, observable, branch)
// entry is the exhaustive double-sum estimate targeting the ideal projection,
// so the table already has state preparation as its only systematic.
QptTables pec_mid_tables(const ExperimentConfig& cfg,
                         const CalibrationBundle& bundle,
                         std::uint64_t side_tag, std::uint64_t repetition,
                         Accounting& acc) {
  QptTables tables;
  tables.minus = Eigen::Matrix4d::Zero();
  for (int prep = 0; prep < 4; ++prep) {
    for (int row = 0; row < 4; ++row) {
      SubCircuitSpec spec;
      spec.input = static_cast<Fiducial>(prep);
      spec.slot = Slot::mid_measure_z();
      spec.observable = static_cast<Pauli>(row);
      for (int branch = 0; branch < 2; ++branch) {
        const ProjectionFit& fit = branch == 0
                                       ? bundle.projection_basis.gamma_fit
                                       : bundle.projection_basis.delta_fit;
        SequentialResult seq;
        if (cfg.mode == RunMode::Exact) {
          seq = sequential_mitigated_expectation_exact(
              spec, cfg.noise, fit, bundle.measurement_error);
        } else {
          StreamKey key{cfg.seed,
                        splitmix64(side_tag ^ static_cast<std::uint64_t>(
                                                  prep * 8 + row * 2 + branch)),
                        repetition};
          seq = sequential_mitigated_expectation_shots(
              spec, cfg.noise, fit, bundle.measurement_error, cfg.shots, key,
              cfg.workers);
          acc.add_sequential(seq, cfg.shots);
        }
        (branch == 0 ? tables.main : *tables.minus)(row, prep) = seq.value;
      }
    }
  }
  return tables;
}

SideMeasurement measure_side(const ExperimentConfig& cfg,
                             const std::optional<CalibrationBundle>& bundle,
                             std::uint64_t side_tag, std::uint64_t pec_tag,
                             std::uint64_t repetition, Accounting& acc) {
  SideMeasurement side;
  if (cfg.mode == RunMode::Exact) {
    side.tables = measure_side_constituents_exact(cfg.noise);
  } else {
    side.tables = measure_side_constituents_shots(
        cfg.noise, cfg.shots, {cfg.seed, side_tag, repetition}, cfg.workers);
    acc.add_constituents(side.tables, cfg.shots);
  }
  if (cfg.mitigation == Mitigation::FullPec) {
    side.pec_mid = pec_mid_tables(cfg, *bundle, pec_tag, repetition, acc);
  }
  return side;
}

CzConstituents mitigated_constituents(const SideMeasurement& side,
                                      const CalibrationBundle& bundle,
                                      Mitigation mitigation) {
  CzConstituents c =
      invert_constituents(side.tables, bundle.measurement_error);
  if (mitigation == Mitigation::FullPec) {
    return CzConstituents{
        c.rot_plus,
        c.rot_minus,
        qpt_linear_inversion(side.pec_mid->main).transfer,
        qpt_linear_inversion(*side.pec_mid->minus).transfer,
        c.idle,
        c.flip};
  }
  return c;
}

// Per-circuit expectations (mean +/- std error over repetitions) from the
// stored raw tables.  Only genuinely measured circuits appear: the identity
// row is analytic except for the mid-measured variant.
Json circuit_stats(const std::vector<std::array<ConstituentTables, 2>>& reps) {
  Json circuits = Json::array();
  const std::size_t n = reps.size();
  std::vector<double> values(n), minus_values(n);
  for (int side = 0; side < 2; ++side) {
    for (int j = 1; j <= 5; ++j) {
      const bool mid = j == 3;
      for (int prep = 0; prep < 4; ++prep) {
        for (int row = mid ? 0 : 1; row < 4; ++row) {
          for (std::size_t r = 0; r < n; ++r) {
            const QptTables& t = variant_tables(reps[r][side], j);
            values[r] = t.main(row, prep);
            if (mid) minus_values[r] = (*t.minus)(row, prep);
          }
          const auto [mean, se] = estimate_moments(values);
          Json entry;
          entry["side"] = side == 0 ? "a" : "b";
          entry["variant"] = j;
          entry["slot"] = variant_name(j);
          entry["preparation"] = fiducial_name(static_cast<Fiducial>(prep));
          entry["observable"] = pauli_name(static_cast<Pauli>(row));
          entry["value"] = mean;
          entry["std_error"] = se;
          if (mid) {
            const auto [mean_minus, se_minus] = estimate_moments(minus_values);
            entry["value_minus"] = mean_minus;
            entry["std_error_minus"] = se_minus;
          }
          circuits.push_back(std::move(entry));
        }
      }
    }
  }
  return circuits;
}

Json constituents_to_json(const CzConstituents& c) {
  const CzConstituents ideal = CzConstituents::ideal();
  const struct {
    const char* name;
    const TransferMatrix& got;
    const TransferMatrix& want;
    bool unitary;  // fidelity is only meaningful vs trace-preserving targets
  } entries[] = {
      {"rot_plus", c.rot_plus, ideal.rot_plus, true},
      {"rot_minus", c.rot_minus, ideal.rot_minus, true},
      {"proj_plus", c.proj_plus, ideal.proj_plus, false},
      {"proj_minus", c.proj_minus, ideal.proj_minus, false},
      {"idle", c.idle, ideal.idle, true},
      {"flip", c.flip, ideal.flip, true},
  };
  Json out = Json::array();
  for (const auto& e : entries) {
    Json entry;
    entry["name"] = e.name;
    entry["transfer_matrix"] = matrix_to_json(e.got.entries());
    entry["max_abs_deviation_from_ideal"] =
        (e.got.entries() - e.want.entries()).cwiseAbs().maxCoeff();
    if (e.unitary) {
      entry["average_gate_fidelity_vs_ideal"] =
          average_gate_fidelity(e.got, e.want);
    } else {
      entry["average_gate_fidelity_vs_ideal"] = nullptr;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

Json report_header(const char* kind, const ExperimentConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  j["config"] = cfg.canonical_echo();
  return j;
}

void write_report(const ExperimentConfig& cfg, const char* file_name,
                  const Json& report) {
  write_text_file(cfg.outputs / file_name, dump_json_17(report));
}

}  // namespace

// ---------------------------------------------------------------------------
// Calibration.

CalibrationBundle run_calibration(const ExperimentConfig& cfg) {
  cfg.validate();
  const NoiseModel& noise = cfg.noise;
  const bool exact = cfg.mode == RunMode::Exact;

  const Eigen::Matrix4d gram =
      exact ? measure_gram_exact(noise)
            : measure_gram_shots(noise, cfg.shots,
                                 {cfg.seed, circuit_tag("calibrate/gram"), 0},
                                 cfg.workers);
  const Eigen::Matrix4d b = measurement_error_matrix(gram);
  ProjectionBasis basis =
      exact ? characterize_projection_basis_exact(noise, b)
            : characterize_projection_basis_shots(
                  noise, b, cfg.shots,
                  {cfg.seed, circuit_tag("calibrate/projection-basis"), 0},
                  cfg.workers);
  const double assignment =
      exact ? assignment_fidelity(noise)
            : estimate_assignment_fidelity(
                  noise, cfg.shots,
                  {cfg.seed, circuit_tag("calibrate/assignment"), 0})
                  .value;
  return CalibrationBundle{
      ideal_state_prep_matrix(),
      gram,
      b,
      condition_of(ideal_state_prep_matrix()),
      condition_of(b),
      assignment,
      {quasi_prob_vector(Pauli::I, b), quasi_prob_vector(Pauli::X, b),
       quasi_prob_vector(Pauli::Y, b), quasi_prob_vector(Pauli::Z, b)},
      std::move(basis)};
}

Json calibration_to_json(const ExperimentConfig& cfg,
                         const CalibrationBundle& bundle) {
  Json j = report_header("calibration", cfg);
  j["prep_matrix"] = matrix_to_json(bundle.prep);
  j["prep_condition"] = bundle.prep_condition;
  j["gram_matrix"] = matrix_to_json(bundle.gram);
  j["measurement_error_matrix"] = matrix_to_json(bundle.measurement_error);
  j["measurement_condition"] = bundle.measurement_condition;
  j["assignment_fidelity"] = bundle.assignment;
  Json quasi = Json::array();
  for (const QuasiProbability& q : bundle.measurement_quasiprob) {
    quasi.push_back(quasiprob_to_json(q));
  }
  j["measurement_quasiprob"] = std::move(quasi);
  Json pb;
  Json names = Json::array();
  Json ops = Json::array();
  for (int u = 0; u < kProjectionBasisSize; ++u) {
    names.push_back(projection_op_name(static_cast<ProjectionOp>(u)));
    ops.push_back(matrix_to_json(bundle.projection_basis.ops[u].entries()));
  }
  pb["names"] = std::move(names);
  pb["ops"] = std::move(ops);
  pb["gamma_fit"] = fit_to_json(bundle.projection_basis.gamma_fit);
  pb["delta_fit"] = fit_to_json(bundle.projection_basis.delta_fit);
  j["projection_basis"] = std::move(pb);
  // Circuit census: 12 Gram circuits, 12 + 3*16 basis characterization
  // circuits, 2 assignment circuits.
  Json acct;
  const long long circuits = 12 + (12 + 3 * 16) + 2;
  acct["circuits"] = circuits;
  const long long per = cfg.mode == RunMode::Shots ? cfg.shots : 0;
  acct["shots_per_circuit"] = per;
  acct["total_shots"] = circuits * per;
  j["shot_accounting"] = std::move(acct);
  return j;
}

CalibrationBundle calibration_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j["schema_version"].get<int>() != kSchemaVersion) {
    throw SchemaError("calibration bundle: schema-version mismatch");
  }
  if (j.at("kind").get<std::string>() != "calibration") {
    throw SchemaError("not a calibration bundle");
  }
  const Json& pb = j.at("projection_basis");
  const Json& ops = pb.at("ops");
  if (ops.size() != kProjectionBasisSize) {
    throw SchemaError("calibration bundle: wrong basis size");
  }
  const auto op = [&](int u) {
    return TransferMatrix(matrix_from_json(ops[static_cast<std::size_t>(u)]));
  };
  ProjectionBasis basis{
      {op(0), op(1), op(2), op(3), op(4), op(5), op(6)},
      fit_from_json(pb.at("gamma_fit")),
      fit_from_json(pb.at("delta_fit"))};
  const Json& quasi = j.at("measurement_quasiprob");
  if (quasi.size() != 4) {
    throw SchemaError("calibration bundle: expected 4 quasiprob rows");
  }
  return CalibrationBundle{
      matrix_from_json(j.at("prep_matrix")),
      matrix_from_json(j.at("gram_matrix")),
      matrix_from_json(j.at("measurement_error_matrix")),
      j.at("prep_condition").get<double>(),
      j.at("measurement_condition").get<double>(),
      j.at("assignment_fidelity").get<double>(),
      {quasiprob_from_json(quasi[0]), quasiprob_from_json(quasi[1]),
       quasiprob_from_json(quasi[2]), quasiprob_from_json(quasi[3])},
      std::move(basis)};
}

Json cmd_calibrate(const ExperimentConfig& cfg) {
  cfg.validate();
  reject_dump_shots(cfg, "calibrate");
  ensure_outputs(cfg);
  const CalibrationBundle bundle = run_calibration(cfg);
  const Json report = calibration_to_json(cfg, bundle);
  write_report(cfg, "calibration.json", report);
  return report;
}

// ---------------------------------------------------------------------------
// Constituent QPT (one side, single repetition diagnostic).

Json cmd_qpt(const ExperimentConfig& cfg,
             const std::optional<std::filesystem::path>& bundle_path) {
  cfg.validate();
  reject_dump_shots(cfg, "qpt");
  ensure_outputs(cfg);
  AcquiredBundle acquired = acquire_bundle(cfg, bundle_path);

  Accounting acc;
  const SideMeasurement side =
      measure_side(cfg, acquired.bundle, circuit_tag("qpt/side"),
                   circuit_tag("qpt/side/pec-mid"), 0, acc);
  const CzConstituents raw = invert_constituents(side.tables);

  Json report = report_header("qpt", cfg);
  report["calibration"] = acquired.reference;
  Json results;
  results["repetitions_used"] = 1;
  results["prep_condition"] = condition_of(ideal_state_prep_matrix());
  results["constituents_unmitigated"] = constituents_to_json(raw);
  if (cfg.mitigation != Mitigation::None) {
    results["constituents_mitigated"] = constituents_to_json(
        mitigated_constituents(side, *acquired.bundle, cfg.mitigation));
  }
  report["results"] = std::move(results);
  report["shot_accounting"] = acc.to_json(cfg.mode == RunMode::Shots ? cfg.shots : 0);
  write_report(cfg, "qpt_report.json", report);
  return report;
}

// ---------------------------------------------------------------------------
// The headline experiment.

Json cmd_virtual_cz_qpt(const ExperimentConfig& cfg,
                        const std::optional<std::filesystem::path>& bundle_path) {
  cfg.validate();
  reject_dump_shots(cfg, "virtual-cz-qpt");
  ensure_outputs(cfg);
  AcquiredBundle acquired = acquire_bundle(cfg, bundle_path);

  const TransferMatrix target = gate_channel(gate_cz());
  const bool exact = cfg.mode == RunMode::Exact;
  const long long reps = exact ? 1 : cfg.repetitions;
  const std::uint64_t tag_a = circuit_tag("virtual-cz-qpt/side-a");
  const std::uint64_t tag_b = circuit_tag("virtual-cz-qpt/side-b");
  const std::uint64_t pec_a = circuit_tag("virtual-cz-qpt/side-a/pec-mid");
  const std::uint64_t pec_b = circuit_tag("virtual-cz-qpt/side-b/pec-mid");

  Accounting acc;
  std::vector<double> f_raw, f_mit;
  Eigen::MatrixXd ptm_raw_sum = Eigen::MatrixXd::Zero(16, 16);
  Eigen::MatrixXd ptm_mit_sum = Eigen::MatrixXd::Zero(16, 16);
  std::vector<std::array<ConstituentTables, 2>> all_tables;
  all_tables.reserve(static_cast<std::size_t>(reps));

  for (long long r = 0; r < reps; ++r) {
    const std::uint64_t rep = static_cast<std::uint64_t>(r);
    const SideMeasurement side_a =
        measure_side(cfg, acquired.bundle, tag_a, pec_a, rep, acc);
    // In exact mode the two sides are identical by construction.
    const SideMeasurement side_b =
        exact ? side_a
              : measure_side(cfg, acquired.bundle, tag_b, pec_b, rep, acc);

    const CzConstituents raw_a = invert_constituents(side_a.tables);
    const CzConstituents raw_b = invert_constituents(side_b.tables);
    const TransferMatrix t_raw = assemble_virtual_ptm(raw_a, raw_b);
    f_raw.push_back(average_gate_fidelity(t_raw, target));
    ptm_raw_sum += t_raw.entries();

    if (cfg.mitigation != Mitigation::None) {
      const CzConstituents mit_a =
          mitigated_constituents(side_a, *acquired.bundle, cfg.mitigation);
      const CzConstituents mit_b =
          exact ? mit_a
                : mitigated_constituents(side_b, *acquired.bundle, cfg.mitigation);
      const TransferMatrix t_mit = assemble_virtual_ptm(mit_a, mit_b);
      f_mit.push_back(average_gate_fidelity(t_mit, target));
      ptm_mit_sum += t_mit.entries();
    }
    all_tables.push_back({side_a.tables, side_b.tables});
  }

  Json report = report_header("virtual-cz-qpt", cfg);
  report["calibration"] = acquired.reference;
  report["calibration_policy"] =
      "calibrated once per experiment, before the first repetition";
  Json results;
  results["repetitions_used"] = reps;
  Json fidelity;
  Json unmit = stat_to_json(f_raw);
  unmit["per_repetition"] = f_raw;
  fidelity["unmitigated"] = std::move(unmit);
  if (!f_mit.empty()) {
    Json mit = stat_to_json(f_mit);
    mit["per_repetition"] = f_mit;
    fidelity["mitigated"] = std::move(mit);
  }
  results["fidelity"] = std::move(fidelity);
  Json ptm;
  ptm["unmitigated"] =
      matrix_to_json(ptm_raw_sum / static_cast<double>(reps));
  if (!f_mit.empty()) {
    ptm["mitigated"] = matrix_to_json(ptm_mit_sum / static_cast<double>(reps));
  }
  results["transfer_matrix"] = std::move(ptm);
  results["circuits"] = circuit_stats(all_tables);
  report["results"] = std::move(results);
  report["shot_accounting"] = acc.to_json(exact ? 0 : cfg.shots);
  write_report(cfg, "virtual_cz_qpt_report.json", report);
  return report;
}

// ---------------------------------------------------------------------------
// Expectation-value estimation through the virtual gate.

Json cmd_expectation(const ExperimentConfig& cfg,
                     const std::filesystem::path& circuit_path,
                     bool quasiprob_sampling) {
  cfg.validate();
  if (cfg.mitigation != Mitigation::None) {
    throw std::invalid_argument(
        "the expectation command evaluates the unmitigated recombination; "
        "run it with mitigation \"none\"");
  }
  ensure_outputs(cfg);
  const TwoQubitCircuit circuit = load_circuit_file(circuit_path);
  const SplitCircuit split = split_at_cz(circuit);
  const double reference = dense_reference_expectation(circuit);
  const bool exact = cfg.mode == RunMode::Exact;
  if (exact && quasiprob_sampling) {
    throw std::invalid_argument(
        "quasi-probability sampling is a Monte Carlo estimator; use shot mode");
  }
  if (cfg.dump_shots && quasiprob_sampling) {
    throw std::invalid_argument(
        "--dump-shots supports the deterministic sampling strategy only");
  }
  if (cfg.dump_shots && exact) {
    throw std::invalid_argument("--dump-shots requires shot mode");
  }

  const long long reps = exact ? 1 : cfg.repetitions;
  const std::uint64_t tag_a = circuit_tag("expectation/side-a");
  const std::uint64_t tag_b = circuit_tag("expectation/side-b");

  Accounting acc;
  std::vector<double> values;
  double propagated_se = 0.0;
  std::vector<std::array<std::vector<BranchExpectation>, 2>> operand_reps;

  for (long long r = 0; r < reps; ++r) {
    const std::uint64_t rep = static_cast<std::uint64_t>(r);
    if (quasiprob_sampling) {
      const RecombinedExpectation est = run_quasiprob_sampling(
          split.a, split.b, cfg.noise,
          cfg.shots, {cfg.seed, circuit_tag("expectation/quasiprob"), rep});
      values.push_back(est.value);
      if (r == 0) propagated_se = est.std_error;
      acc.circuits += 1;  // one sampling run; each sample runs both sides once
      acc.shots += cfg.shots;
    } else {
      std::vector<BranchExpectation> a, b;
      if (exact) {
        a = run_side_exact(split.a, cfg.noise);
        b = run_side_exact(split.b, cfg.noise);
      } else {
        a = run_side_shots(split.a, cfg.noise, cfg.shots, {cfg.seed, tag_a, rep});
        b = run_side_shots(split.b, cfg.noise, cfg.shots, {cfg.seed, tag_b, rep});
        for (const auto& e : a) acc.add_branch(e);
        for (const auto& e : b) acc.add_branch(e);
      }
      const RecombinedExpectation est = recombine(a, b);
      values.push_back(est.value);
      if (r == 0) propagated_se = est.std_error;
      operand_reps.push_back({std::move(a), std::move(b)});
    }
  }

  const auto [mean, scatter_se] = estimate_moments(values);
  // With a single repetition the scatter is undefined; fall back to the
  // propagated (or in-run) standard error.
  const double std_error = reps > 1 ? scatter_se : propagated_se;

  Json report = report_header("expectation", cfg);
  report["circuit"] = circuit_to_json(circuit);
  Json results;
  results["sampling"] = quasiprob_sampling ? "quasiprob" : "deterministic";
  results["repetitions_used"] = reps;
  results["value"] = mean;
  results["std_error"] = std_error;
  results["reference_value"] = reference;
  results["deviation_from_reference"] = mean - reference;
  results["per_repetition"] = values;
  if (quasiprob_sampling) {
    results["gamma"] = cz_quasiprob_gamma();
    results["samples_per_repetition"] = cfg.shots;
  } else {
    // Aggregate the ten operand estimates over repetitions.
    Json operands = Json::array();
    std::vector<double> v(operand_reps.size()), vm(operand_reps.size());
    for (int side = 0; side < 2; ++side) {
      for (int j = 1; j <= 5; ++j) {
        for (std::size_t r = 0; r < operand_reps.size(); ++r) {
          const BranchExpectation& e = operand_reps[r][side][static_cast<std::size_t>(j - 1)];
          v[r] = e.value;
          if (j == 3) vm[r] = *e.value_minus;
        }
        const auto [m, se] = estimate_moments(v);
        Json entry;
        entry["side"] = side == 0 ? "a" : "b";
        entry["variant"] = j;
        entry["slot"] = variant_name(j);
        entry["value"] = m;
        entry["std_error"] = se;
        if (j == 3) {
          const auto [mm, sem] = estimate_moments(vm);
          entry["value_minus"] = mm;
          entry["std_error_minus"] = sem;
        }
        operands.push_back(std::move(entry));
      }
    }
    results["operands"] = std::move(operands);
  }
  report["results"] = std::move(results);
  report["shot_accounting"] = acc.to_json(exact ? 0 : cfg.shots);

  if (cfg.dump_shots) {
    const fs::path dir = cfg.outputs / "shots";
    fs::create_directories(dir);
    for (int side = 0; side < 2; ++side) {
      const CzSideTemplate& tpl = side == 0 ? split.a : split.b;
      const std::uint64_t tag = side == 0 ? tag_a : tag_b;
      for (const CzVariant& variant : cz_decomposition_variants()) {
        std::vector<ShotRecord> records;
        run_shots(make_side_spec(tpl, variant.slot), cfg.noise, cfg.shots,
                  side_variant_key({cfg.seed, tag, 0}, variant.j), &records);
        std::string csv =
            "repetition,shot,postselected,mid_outcome,final_outcome,"
            "true_final,rng_stream_id\n";
        for (const ShotRecord& rec : records) {
          csv += std::to_string(rec.repetition) + "," +
                 std::to_string(rec.shot) + "," +
                 std::to_string(rec.postselected ? 1 : 0) + "," +
                 std::to_string(rec.mid_outcome) + "," +
                 std::to_string(rec.final_outcome) + "," +
                 std::to_string(rec.true_final) + "," +
                 std::to_string(rec.rng_stream_id) + "\n";
        }
        write_text_file(dir / (std::string(side == 0 ? "a" : "b") + "_variant" +
                               std::to_string(variant.j) + "_rep0.csv"),
                        csv);
      }
    }
  }

  write_report(cfg, "expectation_report.json", report);
  return report;
}

// ---------------------------------------------------------------------------
// Summary tables.

std::string cmd_report(const ExperimentConfig& cfg,
                       const std::vector<std::filesystem::path>& report_paths) {
  if (report_paths.empty()) {
    throw std::invalid_argument("report requires at least one report file");
  }
  ensure_outputs(cfg);

  struct Row {
    std::string file;
    std::string kind;
    std::string mode;
    std::string mitigation;
    std::optional<std::pair<double, double>> unmit;
    std::optional<std::pair<double, double>> mit;
    std::optional<std::pair<double, double>> value;
    std::optional<double> headline;
  };
  std::vector<Row> rows;
  std::map<std::string, int> stem_count;  // CSV names stay unique per input

  for (const fs::path& path : report_paths) {
    const Json j = read_json_file(path);
    if (!j.is_object() || !j.contains("schema_version") ||
        j["schema_version"].get<int>() != kSchemaVersion) {
      throw SchemaError("schema-version mismatch in " + path.string());
    }
    Row row;
    row.file = path.filename().string();
    row.kind = j.at("kind").get<std::string>();
    const Json& config = j.at("config");
    row.mode = config.at("mode").get<std::string>();
    row.mitigation = config.at("mitigation").get<std::string>();
    std::string stem = path.stem().string();
    const int repeat = stem_count[stem]++;
    if (repeat > 0) stem += "_" + std::to_string(repeat + 1);

    if (row.kind == "virtual-cz-qpt") {
      const Json& fid = j.at("results").at("fidelity");
      row.unmit = {fid.at("unmitigated").at("mean").get<double>(),
                   fid.at("unmitigated").at("std_error").get<double>()};
      if (fid.contains("mitigated")) {
        row.mit = {fid.at("mitigated").at("mean").get<double>(),
                   fid.at("mitigated").at("std_error").get<double>()};
      }
      row.headline = row.mit ? row.mit->first : row.unmit->first;
      const Json& ptm = j.at("results").at("transfer_matrix");
      write_matrix_csv(cfg.outputs / (stem + "_ptm_unmitigated.csv"),
                       matrix_from_json(ptm.at("unmitigated")));
      if (ptm.contains("mitigated")) {
        write_matrix_csv(cfg.outputs / (stem + "_ptm_mitigated.csv"),
                         matrix_from_json(ptm.at("mitigated")));
      }
    } else if (row.kind == "expectation") {
      const Json& res = j.at("results");
      row.value = {res.at("value").get<double>(),
                   res.at("std_error").get<double>()};
      row.headline = row.value->first;
    } else if (row.kind == "qpt") {
      const auto dump_set = [&](const char* key, const char* suffix) {
        if (!j.at("results").contains(key)) return;
        for (const Json& entry : j.at("results").at(key)) {
          write_matrix_csv(
              cfg.outputs / (stem + "_" + entry.at("name").get<std::string>() +
                             suffix + ".csv"),
              matrix_from_json(entry.at("transfer_matrix")));
        }
      };
      dump_set("constituents_unmitigated", "_unmitigated");
      dump_set("constituents_mitigated", "_mitigated");
    } else {
      throw SchemaError("unsupported report kind \"" + row.kind +
                        "\" in " + path.string());
    }
    rows.push_back(std::move(row));
  }

  const bool with_delta = rows.size() >= 2;
  const std::optional<double> baseline = rows.front().headline;

  std::string text = "report summary (" + std::to_string(rows.size()) +
                     (rows.size() == 1 ? " report)\n" : " reports)\n");
  std::string csv =
      "file,kind,mode,mitigation,f_unmitigated,f_unmitigated_std_error,"
      "f_mitigated,f_mitigated_std_error,value,value_std_error,delta_f\n";
  for (const Row& row : rows) {
    text += row.file + ": " + row.kind + " mode=" + row.mode +
            " mitigation=" + row.mitigation;
    csv += row.file + "," + row.kind + "," + row.mode + "," + row.mitigation;
    const auto pair_cells = [&](const std::optional<std::pair<double, double>>& p,
                                const char* label) {
      if (p) {
        text += std::string(" ") + label + "=" + fixed6(p->first) + "±" +
                fixed6(p->second);
        csv += "," + format_double_17(p->first) + "," + format_double_17(p->second);
      } else {
        csv += ",,";
      }
    };
    pair_cells(row.unmit, "f_unmitigated");
    pair_cells(row.mit, "f_mitigated");
    pair_cells(row.value, "value");
    if (with_delta && row.headline && baseline) {
      const double delta = *row.headline - *baseline;
      text += " delta_f=" + std::string(delta >= 0 ? "+" : "") + fixed6(delta);
      csv += "," + format_double_17(delta);
    } else {
      csv += ",";
    }
    text += "\n";
    csv += "\n";
  }

  write_text_file(cfg.outputs / "summary.txt", text);
  write_text_file(cfg.outputs / "fidelity_table.csv", csv);
  return text;
}

}  // namespace vcz
