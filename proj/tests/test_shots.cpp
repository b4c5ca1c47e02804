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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"

using namespace vcz;

namespace {

constexpr double kPi = std::numbers::pi;

// Dense density-matrix re-implementation of the exact engine's semantics,
// built only from oracle primitives.  Used to cross-check run_exact.
struct DenseResult {
  double value;
  double value_minus;
  bool forked;
};

oracle::Mat dense_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::RZ: return oracle::u_rz(g.theta);
    case GateKind::RX: return oracle::u_rx(g.theta);
    case GateKind::RY: return oracle::u_ry(g.theta);
    case GateKind::I: return oracle::Mat::Identity(2, 2);
    case GateKind::Z: return oracle::sigma(3);
    case GateKind::H: return oracle::u_h();
    default: throw std::logic_error("dense_gate: unsupported");
  }
}

DenseResult dense_exact(const SubCircuitSpec& spec, const NoiseModel& noise) {
  const auto depol = [&](oracle::Mat rho) -> oracle::Mat {
    if (noise.single_qubit_depolarizing > 0.0) {
      return oracle::apply_kraus(
          oracle::kraus_depolarizing(noise.single_qubit_depolarizing), rho);
    }
    return rho;
  };
  const auto damp = [&](oracle::Mat rho) -> oracle::Mat {
    if (!(noise.op_duration > 0.0 && (noise.t1 > 0.0 || noise.t2 > 0.0))) return rho;
    const double gamma =
        noise.t1 > 0.0 ? 1.0 - std::exp(-noise.op_duration / noise.t1) : 0.0;
    const double transverse = noise.t2 > 0.0 ? std::exp(-noise.op_duration / noise.t2)
                                             : std::sqrt(1.0 - gamma);
    const double pure_z = std::min(1.0, transverse / std::sqrt(1.0 - gamma));
    rho = oracle::apply_kraus(oracle::kraus_amplitude_damping(gamma), rho);
    return oracle::apply_kraus(oracle::kraus_dephasing(pure_z), rho);
  };
  const auto gate = [&](oracle::Mat rho, const Gate& g) -> oracle::Mat {
    rho = oracle::apply_unitary(dense_gate(g), rho);
    if (is_physical_pulse(g)) rho = depol(rho);
    return damp(rho);
  };
  const auto measure = [&](oracle::Mat rho, Pauli obs) -> double {
    if (obs == Pauli::I) return rho.trace().real();
    if (obs == Pauli::X) {
      rho = oracle::apply_unitary(oracle::u_ry(kPi / 2), rho);
      rho = damp(depol(rho));
    } else if (obs == Pauli::Y) {
      rho = oracle::apply_unitary(oracle::u_rx(-kPi / 2), rho);
      rho = damp(depol(rho));
    }
    const double z = (oracle::sigma(3) * rho).trace().real();
    const double trace = rho.trace().real();
    return (noise.p_gg - noise.p_ee) * trace + (noise.p_gg + noise.p_ee - 1.0) * z;
  };

  oracle::Mat rho = oracle::dm_fiducial(fiducial_name(std::get<Fiducial>(spec.input)));
  for (const auto& g : spec.pre) rho = gate(rho, g);

  DenseResult result{0.0, 0.0, false};
  if (spec.slot->kind == Slot::Kind::MidMeasureZ) {
    result.forked = true;
    oracle::Mat plus = noise.p_gg * oracle::apply_kraus({oracle::projector(3, +1)}, rho) +
                       (1.0 - noise.p_ee) * oracle::apply_kraus({oracle::projector(3, -1)}, rho);
    oracle::Mat minus = (1.0 - noise.p_gg) * oracle::apply_kraus({oracle::projector(3, +1)}, rho) +
                        noise.p_ee * oracle::apply_kraus({oracle::projector(3, -1)}, rho);
    plus = damp(plus);
    minus = damp(minus);
    for (const auto& g : spec.post) {
      plus = gate(plus, g);
      minus = gate(minus, g);
    }
    result.value = measure(plus, spec.observable);
    result.value_minus = measure(minus, spec.observable);
  } else {
    rho = gate(rho, spec.slot->gate);
    for (const auto& g : spec.post) rho = gate(rho, g);
    result.value = measure(rho, spec.observable);
  }
  return result;
}

SubCircuitSpec make_spec(Fiducial in, Slot slot, Pauli obs,
                         std::vector<Gate> pre = {}, std::vector<Gate> post = {}) {
  SubCircuitSpec spec;
  spec.input = in;
  spec.pre = std::move(pre);
  spec.slot = std::move(slot);
  spec.post = std::move(post);
  spec.observable = obs;
  return spec;
}

NoiseModel confusion_noise(double pgg, double pee) {
  NoiseModel n = NoiseModel::ideal();
  n.p_gg = pgg;
  n.p_ee = pee;
  return n;
}

}  // namespace

TEST_CASE("run_exact: decomposition slot examples") {
  const auto ideal = NoiseModel::ideal();

  const auto rz_half = run_exact(
      make_spec(Fiducial::Plus, Slot::unitary(rz(kPi / 2)), Pauli::X), ideal);
  CHECK(rz_half.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(rz_half.value_minus.has_value());
  CHECK(rz_half.std_error == 0.0);

  const auto zero_proj = run_exact(
      make_spec(Fiducial::Zero, Slot::mid_measure_z(), Pauli::Z), ideal);
  CHECK(zero_proj.value == doctest::Approx(1.0));
  CHECK(zero_proj.value_minus.value() == doctest::Approx(0.0));

  const auto plus_proj = run_exact(
      make_spec(Fiducial::Plus, Slot::mid_measure_z(), Pauli::I), ideal);
  CHECK(plus_proj.value == doctest::Approx(0.5));
  CHECK(plus_proj.value_minus.value() == doctest::Approx(0.5));
}

TEST_CASE("run_exact: observable I is unity for trace-preserving circuits") {
  NoiseModel noise = confusion_noise(0.93, 0.9);
  noise.single_qubit_depolarizing = 0.05;
  const auto r = run_exact(
      make_spec(Fiducial::IPlus, Slot::unitary(gate_h()), Pauli::I, {rx(0.4)}, {ry(1.2)}),
      noise);
  CHECK(r.value == 1.0);
}

TEST_CASE("run_exact matches the dense density-matrix oracle on random circuits") {
  std::mt19937_64 mt(4242);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const auto random_gate = [&]() -> Gate {
    switch (mt() % 6) {
      case 0: return rz(angle(mt));
      case 1: return rx(angle(mt));
      case 2: return ry(angle(mt));
      case 3: return gate_h();
      case 4: return gate_z();
      default: return gate_i();
    }
  };
  const std::vector<NoiseModel> noises = {
      NoiseModel::ideal(), confusion_noise(0.9609, 0.9609),
      [] {
        NoiseModel n = confusion_noise(0.97, 0.91);
        n.single_qubit_depolarizing = 0.02;
        n.t1 = 20e-6;
        n.t2 = 5e-6;
        n.op_duration = 0.4e-6;
        return n;
      }()};

  for (const auto& noise : noises) {
    for (int trial = 0; trial < 40; ++trial) {
      SubCircuitSpec spec;
      spec.input = static_cast<Fiducial>(mt() % 4);
      const int n_pre = static_cast<int>(mt() % 3);
      const int n_post = static_cast<int>(mt() % 3);
      for (int i = 0; i < n_pre; ++i) spec.pre.push_back(random_gate());
      for (int i = 0; i < n_post; ++i) spec.post.push_back(random_gate());
      switch (mt() % 3) {
        case 0: spec.slot = Slot::unitary(random_gate()); break;
        case 1: spec.slot = Slot::mid_measure_z(); break;
        default: spec.slot = Slot::unitary(rz(angle(mt))); break;
      }
      spec.observable = static_cast<Pauli>(mt() % 4);

      const auto got = run_exact(spec, noise);
      const auto want = dense_exact(spec, noise);
      if (want.forked) {
        CHECK(got.value == doctest::Approx(want.value).epsilon(1e-10));
        CHECK(got.value_minus.value() == doctest::Approx(want.value_minus).epsilon(1e-10));
      } else if (spec.observable == Pauli::I) {
        CHECK(got.value == 1.0);
      } else {
        CHECK(got.value == doctest::Approx(want.value).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("run_exact accepts an explicit channel slot") {
  const auto spec = make_spec(Fiducial::Plus,
                              Slot::explicit_channel(depolarizing_channel(0.4)), Pauli::X);
  const auto r = run_exact(spec, NoiseModel::ideal());
  CHECK(r.value == doctest::Approx(0.6).epsilon(1e-12));
  // Non-trace-preserving channel: observable I reports the output trace.
  const auto proj = make_spec(Fiducial::Plus,
                              Slot::explicit_channel(projection_channel({Pauli::Z, +1})),
                              Pauli::I);
  CHECK(run_exact(proj, NoiseModel::ideal()).value == doctest::Approx(0.5));
}

TEST_CASE("run_shots: noiseless deterministic outcomes") {
  const auto spec = make_spec(Fiducial::Zero, Slot::unitary(gate_i()), Pauli::Z);
  const auto r = run_shots(spec, NoiseModel::ideal(), 100000, {7, 1, 0});
  CHECK(r.value == 1.0);  // every shot records +1
  CHECK(r.std_error == 0.0);
  CHECK(r.n_shots_used == 100000);
  CHECK(r.postselection_discard_rate == 0.0);
}

TEST_CASE("run_shots: projection branch statistics at |+>") {
  const auto spec = make_spec(Fiducial::Plus, Slot::mid_measure_z(), Pauli::I);
  const auto r = run_shots(spec, NoiseModel::ideal(), 100000, {11, 22, 0});
  // Branch probabilities 1/2 each; binomial standard error ~ 0.00158.
  CHECK(std::abs(r.value - 0.5) < 4 * 0.00158);
  CHECK(std::abs(r.value_minus.value() - 0.5) < 4 * 0.00158);
  // With observable I the two branch fractions sum to exactly one.
  CHECK(r.value + r.value_minus.value() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.std_error == doctest::Approx(0.00158).epsilon(0.05));
}

TEST_CASE("run_shots is deterministic and seed-sensitive") {
  const auto spec = make_spec(Fiducial::IPlus, Slot::mid_measure_z(), Pauli::X, {ry(0.3)});
  const auto noise = confusion_noise(0.95, 0.9);
  const auto a = run_shots(spec, noise, 5000, {123, 456, 2});
  const auto b = run_shots(spec, noise, 5000, {123, 456, 2});
  CHECK(a.value == b.value);
  CHECK(a.value_minus.value() == b.value_minus.value());
  CHECK(a.std_error == b.std_error);
  const auto c = run_shots(spec, noise, 5000, {124, 456, 2});
  CHECK(a.value != c.value);
}

TEST_CASE("run_shots agrees with run_exact across noise models") {
  std::vector<std::pair<SubCircuitSpec, int>> cases;
  cases.push_back({make_spec(Fiducial::Plus, Slot::unitary(rz(kPi / 2)), Pauli::Y), 0});
  cases.push_back({make_spec(Fiducial::Zero, Slot::unitary(gate_h()), Pauli::X), 1});
  cases.push_back({make_spec(Fiducial::One, Slot::mid_measure_z(), Pauli::Z, {ry(0.7)}), 2});
  cases.push_back({make_spec(Fiducial::IPlus, Slot::mid_measure_z(), Pauli::Y, {}, {rx(0.5)}), 3});

  std::vector<NoiseModel> noises = {NoiseModel::ideal(), confusion_noise(0.9609, 0.9609)};
  {
    NoiseModel full = confusion_noise(0.97, 0.93);
    full.f_init = 0.99;
    full.single_qubit_depolarizing = 0.01;
    full.t1 = 20.2e-6;
    full.t2 = 3.1e-6;
    full.op_duration = 0.2e-6;
    noises.push_back(full);
  }

  const long long n = 200000;
  for (std::size_t ni = 0; ni < noises.size(); ++ni) {
    for (const auto& [spec, idx] : cases) {
      const auto exact = run_exact(spec, noises[ni]);
      const auto sampled =
          run_shots(spec, noises[ni], n, {900 + ni, static_cast<std::uint64_t>(idx), 0});
      const double tol_plus = 5.0 * std::max(sampled.std_error, 1e-4);
      CHECK(std::abs(sampled.value - exact.value) < tol_plus);
      if (exact.value_minus) {
        const double tol_minus = 5.0 * std::max(sampled.std_error_minus, 1e-4);
        CHECK(std::abs(*sampled.value_minus - *exact.value_minus) < tol_minus);
      }
    }
  }
}

TEST_CASE("branch completeness under noise: probabilities sum to one") {
  NoiseModel noise = confusion_noise(0.94, 0.9);
  noise.f_init = 0.98;
  const auto spec = make_spec(Fiducial::IPlus, Slot::mid_measure_z(), Pauli::I, {rx(1.1)});
  const auto exact = run_exact(spec, noise);
  CHECK(exact.value + exact.value_minus.value() == doctest::Approx(1.0).epsilon(1e-12));
  const auto sampled = run_shots(spec, noise, 50000, {31, 7, 0});
  CHECK(sampled.value + sampled.value_minus.value() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("initialization post-selection: discard rate and residual excitation") {
  NoiseModel noise = NoiseModel::ideal();
  noise.f_init = 0.9895;
  noise.p_gg = 0.9609;
  noise.p_ee = 0.9609;

  const auto spec = make_spec(Fiducial::Zero, Slot::unitary(gate_i()), Pauli::Z);
  const long long n = 400000;
  const auto r = run_shots(spec, noise, n, {2026, 1, 0});

  const double accept = noise.f_init * noise.p_gg + (1 - noise.f_init) * (1 - noise.p_ee);
  CHECK(r.postselection_discard_rate ==
        doctest::Approx(1.0 - accept).epsilon(0.02));

  // Accepted shots carry residual excited population (1-f_init)(1-p_ee)/accept.
  const double q_excited = (1 - noise.f_init) * (1 - noise.p_ee) / accept;
  const double z = 1.0 - 2.0 * q_excited;
  const double expected = (noise.p_gg + noise.p_ee - 1.0) * z;
  CHECK(std::abs(r.value - expected) < 5 * r.std_error);
}

TEST_CASE("depolarizing is sampled as a Pauli twirl") {
  NoiseModel noise = NoiseModel::ideal();
  noise.single_qubit_depolarizing = 0.3;
  // H is physical: |0> -> |+>, then depolarized; X expectation 1-p.
  const auto spec = make_spec(Fiducial::Zero, Slot::unitary(gate_h()), Pauli::X);
  const auto exact = run_exact(spec, noise);
  // Measurement pre-rotation is also physical, so it depolarizes once more.
  CHECK(exact.value == doctest::Approx((1 - 0.3) * (1 - 0.3)).epsilon(1e-12));
  const auto sampled = run_shots(spec, noise, 200000, {555, 5, 0});
  CHECK(std::abs(sampled.value - exact.value) < 5 * sampled.std_error);
}

TEST_CASE("damping trajectories reproduce the damping channel") {
  NoiseModel noise = NoiseModel::ideal();
  noise.t1 = 20.2e-6;
  noise.t2 = 3.1e-6;
  noise.op_duration = 2.0e-6;
  const auto spec = make_spec(Fiducial::Plus, Slot::unitary(gate_i()), Pauli::X);
  const auto exact = run_exact(spec, noise);
  // One damped slot shrinks X by e^{-dt/t2}; the measurement pre-rotation is a
  // physical slot too, so the rotated Z component relaxes once more.
  const double gamma_relax = 1.0 - std::exp(-2.0 / 20.2);
  const double expected_x = gamma_relax + (1.0 - gamma_relax) * std::exp(-2.0 / 3.1);
  CHECK(exact.value == doctest::Approx(expected_x).epsilon(1e-10));
  const auto sampled = run_shots(spec, noise, 200000, {808, 9, 0});
  CHECK(std::abs(sampled.value - exact.value) < 5 * sampled.std_error);

  // Relaxation pulls |1> toward ground.
  const auto decay_spec = make_spec(Fiducial::One, Slot::unitary(gate_i()), Pauli::Z);
  const auto decay_exact = run_exact(decay_spec, noise);
  const double gamma = 1.0 - std::exp(-2.0 / 20.2);
  CHECK(decay_exact.value == doctest::Approx(gamma - (1 - gamma)).epsilon(1e-10));
  const auto decay_sampled = run_shots(decay_spec, noise, 200000, {808, 10, 0});
  CHECK(std::abs(decay_sampled.value - decay_exact.value) < 5 * decay_sampled.std_error);
}

TEST_CASE("shot records are dumped when requested") {
  const auto spec = make_spec(Fiducial::Plus, Slot::mid_measure_z(), Pauli::Z);
  std::vector<ShotRecord> records;
  const auto r = run_shots(spec, NoiseModel::ideal(), 500, {4, 2, 3}, &records);
  REQUIRE(records.size() == 500);
  CHECK(records.front().repetition == 3);
  long long mid_plus = 0;
  for (const auto& rec : records) {
    CHECK((rec.mid_outcome == 1 || rec.mid_outcome == -1));
    CHECK((rec.final_outcome == 1 || rec.final_outcome == -1));
    if (rec.mid_outcome == 1) ++mid_plus;
  }
  CHECK(static_cast<double>(mid_plus) / 500 == doctest::Approx(r.value + 0.0).epsilon(0.3));
}

TEST_CASE("run_shots input validation") {
  const auto spec = make_spec(Fiducial::Zero, Slot::unitary(gate_i()), Pauli::Z);
  CHECK_THROWS_AS(run_shots(spec, NoiseModel::ideal(), 0, {1, 1, 0}),
                  std::invalid_argument);

  SubCircuitSpec channel_spec = spec;
  channel_spec.slot = Slot::explicit_channel(depolarizing_channel(0.1));
  CHECK_THROWS_AS(run_shots(channel_spec, NoiseModel::ideal(), 10, {1, 1, 0}),
                  std::invalid_argument);

  SubCircuitSpec state_spec = spec;
  state_spec.input = PauliState::bloch(0.2, 0.1, 0.3);
  CHECK_THROWS_AS(run_shots(state_spec, NoiseModel::ideal(), 10, {1, 1, 0}),
                  std::invalid_argument);

  NoiseModel hopeless = NoiseModel::ideal();
  hopeless.f_init = 0.0;
  CHECK_THROWS_AS(run_shots(spec, hopeless, 10, {1, 1, 0}), std::invalid_argument);

  SubCircuitSpec two_qubit = spec;
  two_qubit.pre.push_back(gate_cz());
  CHECK_THROWS_AS(run_exact(two_qubit, NoiseModel::ideal()), std::invalid_argument);
}

TEST_CASE("estimate_moments") {
  std::vector<double> same(100, 0.25);
  const auto [m1, s1] = estimate_moments(same);
  CHECK(m1 == doctest::Approx(0.25));
  CHECK(s1 == 0.0);

  std::vector<double> balanced;
  for (int i = 0; i < 50; ++i) {
    balanced.push_back(1.0);
    balanced.push_back(-1.0);
  }
  const auto [m2, s2] = estimate_moments(balanced);
  CHECK(m2 == doctest::Approx(0.0));
  const double n = 100.0;
  CHECK(s2 == doctest::Approx(std::sqrt(n / (n - 1)) / std::sqrt(n)).epsilon(1e-12));

  // Order independence.
  std::mt19937_64 mt(9);
  std::vector<double> values(1000);
  for (auto& v : values) v = std::uniform_real_distribution<double>(-1, 1)(mt);
  auto shuffled = values;
  std::shuffle(shuffled.begin(), shuffled.end(), mt);
  const auto [ma, sa] = estimate_moments(values);
  const auto [mb, sb] = estimate_moments(shuffled);
  CHECK(ma == doctest::Approx(mb).epsilon(1e-12));
  CHECK(sa == doctest::Approx(sb).epsilon(1e-12));

  CHECK_THROWS_AS(estimate_moments(std::span<const double>{}), std::invalid_argument);
  const std::vector<double> single{0.5};
  const auto [m3, s3] = estimate_moments(single);
  CHECK(m3 == 0.5);
  CHECK(s3 == 0.0);
}
