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

#pragma once

// Local decomposition of the CZ gate.
//
// The two-qubit CZ channel is a finite signed combination of strictly local
// operations:
//
//   T(CZ) =  1/2 [ T(RZ(+pi/2)) (x) T(RZ(+pi/2))
//               +  T(RZ(-pi/2)) (x) T(RZ(-pi/2)) ]
//          - 1/2 [ (T(P+Z) - T(P-Z)) (x) (T(Z) - T(I))
//               +  (T(Z) - T(I)) (x) (T(P+Z) - T(P-Z)) ]
//
// where P+Z / P-Z are the (trace-decreasing) projections onto the Z
// eigenstates, implemented physically by a mid-circuit Z measurement whose
// recorded outcome labels the branch.  Every per-qubit variant j in 1..5
// replaces the CZ slot with
//
//   j=1: RZ(+pi/2)   j=2: RZ(-pi/2)   j=3: mid-circuit Z measurement
//   j=4: I (idle)    j=5: Z
//
// and product expectations of the two-qubit circuit are recovered by
// `recombine` from the ten bilinear terms of the expansion.  The same
// expansion, normalised into a quasi-probability distribution over six local
// circuit pairs with sampling overhead gamma = 3, drives the direct Monte
// Carlo estimator `run_quasiprob_sampling`.
//
// Branch expectations entering the plan are unnormalised: for j=3 the two
// branch values are E[outcome * 1(mid = +1)] and E[outcome * 1(mid = -1)],
// which is what `run_exact` / `run_shots` report.

#include <cstdint>
#include <vector>

#include "channels.hpp"
#include "pauli.hpp"
#include "rng.hpp"
#include "subcircuit.hpp"

namespace vcz {

/// One per-qubit replacement for the CZ slot.
struct CzVariant {
  int j;      // variant index, 1-based
  Slot slot;  // what runs in place of the CZ on this qubit
};

/// The five slot variants, ordered j = 1..5.
std::vector<CzVariant> cz_decomposition_variants();

/// Reference to one branch expectation: plain nu_j for j in {1,2,4,5},
/// or the +/- branch of the mid-measured variant when j == 3.
struct CzOperand {
  int j;       // 1..5
  int branch;  // +1 / -1 when j == 3, otherwise 0
};

/// One bilinear term of the expansion: coefficient * nu_a * nu_b.
struct CzTerm {
  double coefficient;
  CzOperand a;
  CzOperand b;
};

/// The ten-term recombination plan.  Coefficients are +/- 1/2 and the plan
/// sums to the exact CZ transfer matrix when evaluated on ideal constituents.
std::vector<CzTerm> cz_recombination_plan();

/// The six single-qubit channels a side contributes to the expansion.
struct CzConstituents {
  TransferMatrix rot_plus;    // j=1, RZ(+pi/2)
  TransferMatrix rot_minus;   // j=2, RZ(-pi/2)
  TransferMatrix proj_plus;   // j=3, + branch (projection onto |0>)
  TransferMatrix proj_minus;  // j=3, - branch (projection onto |1>)
  TransferMatrix idle;        // j=4
  TransferMatrix flip;        // j=5, Z

  static CzConstituents ideal();
  const TransferMatrix& operand(const CzOperand& op) const;
};

/// Evaluates the plan on per-side constituent channels, returning the
/// assembled two-qubit transfer matrix (qubit A major).  With ideal
/// constituents this is exactly the CZ transfer matrix; with measured
/// constituents it is the transfer matrix of the virtual gate.
TransferMatrix assemble_virtual_ptm(const CzConstituents& a,
                                    const CzConstituents& b);

/// Result of a recombined product expectation.
struct RecombinedExpectation {
  double value;
  double std_error;  // first-order propagation, operands treated independent
};

/// Evaluates the plan on measured branch expectations.  `a` and `b` hold the
/// five variants in order j = 1..5; the j=3 entries must carry both branches.
RecombinedExpectation recombine(const std::vector<BranchExpectation>& a,
                                const std::vector<BranchExpectation>& b);

/// Everything about a side's sub-circuit except the CZ slot.
struct CzSideTemplate {
  Fiducial input = Fiducial::Zero;
  std::vector<Gate> pre;
  std::vector<Gate> post;
  Pauli observable = Pauli::I;
};

SubCircuitSpec make_side_spec(const CzSideTemplate& side, Slot slot);

/// The stream key variant j of a side draws from under `run_side_shots`;
/// exposed so callers re-running a single variant (e.g. to dump shot records)
/// reproduce the identical trajectories.
StreamKey side_variant_key(const StreamKey& base, int j);

/// Runs all five variants of one side exactly; entry [j-1] holds variant j.
std::vector<BranchExpectation> run_side_exact(const CzSideTemplate& side,
                                              const NoiseModel& noise);

/// Shot-based version; `key.circuit` is combined with the variant index so
/// every variant draws from its own stream.
std::vector<BranchExpectation> run_side_shots(const CzSideTemplate& side,
                                              const NoiseModel& noise,
                                              long long n_shots,
                                              const StreamKey& key);

/// One entry of the quasi-probability sampling plan: a pair of local slots,
/// the sampling probability, and the sign rule.  When `sign_from_a_mid`
/// (resp. `_b_mid`) is set, the sample weight picks up the recorded mid
/// outcome of that side.
struct QuasiCircuit {
  Slot a;
  Slot b;
  double probability;
  int base_sign;
  bool sign_from_a_mid;
  bool sign_from_b_mid;
};

/// Six circuit pairs with probability 1/6 each; one-norm gamma = 3.
std::vector<QuasiCircuit> cz_quasiprob_plan();

/// The sampling overhead of the plan (sum of absolute quasi-probabilities).
double cz_quasiprob_gamma();

/// Direct Monte Carlo estimate of the product expectation through the virtual
/// CZ: per sample one of the six circuit pairs is drawn uniformly and both
/// local circuits are run for one shot; the estimator is
/// gamma * sign * outcome_a * outcome_b.
RecombinedExpectation run_quasiprob_sampling(const CzSideTemplate& a,
                                             const CzSideTemplate& b,
                                             const NoiseModel& noise,
                                             long long n_samples,
                                             const StreamKey& key);

}  // namespace vcz

