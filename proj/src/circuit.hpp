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

/// @file circuit.hpp
/// Two-qubit circuit descriptions accepted by the expectation command: a
/// product fiducial input, arbitrary single-qubit gates, exactly one CZ, and
/// a product Pauli observable.  The circuit splits at the CZ into the two
/// local side templates, and a dense statevector evaluation provides the
/// ideal reference value.
///
/// JSON schema (version 1):
///   {
///     "schema_version": 1,
///     "input": ["plus", "zero"],           // [qubit 0, qubit 1]
///     "operations": [
///       {"gate": "ry", "qubit": 0, "theta": 0.7853981633974483},
///       {"gate": "cz"},
///       {"gate": "h",  "qubit": 1}
///     ],
///     "observable": ["X", "I"]
///   }
/// Gate names: rx, ry, rz (require "theta"), h, i, z, and the shorthands
/// x = rx(pi), y = ry(pi).  Anything else — including a second two-qubit
/// gate — is rejected.

#pragma once

#include "channels.hpp"
#include "io.hpp"
#include "virtual_gate.hpp"

#include <array>
#include <vector>

namespace vcz {

/// One time-ordered operation; `qubit` is ignored for the CZ.
struct CircuitOp {
  Gate gate;
  int qubit = 0;
};

struct TwoQubitCircuit {
  std::array<Fiducial, 2> input = {Fiducial::Zero, Fiducial::Zero};
  std::vector<CircuitOp> operations;
  std::array<Pauli, 2> observable = {Pauli::Z, Pauli::Z};

  /// Throws std::invalid_argument unless the circuit contains exactly one
  /// CZ, every other gate is single-qubit on qubit 0 or 1, and thetas are
  /// finite.
  void validate() const;
};

TwoQubitCircuit circuit_from_json(const Json& j);
TwoQubitCircuit load_circuit_file(const std::filesystem::path& path);

/// Canonical JSON form (shorthands expanded, e.g. x -> rx(pi)); embedded in
/// expectation reports.
Json circuit_to_json(const TwoQubitCircuit& circuit);

/// The two local sub-circuit templates obtained by cutting at the CZ.
struct SplitCircuit {
  CzSideTemplate a;  // qubit 0
  CzSideTemplate b;  // qubit 1
};

SplitCircuit split_at_cz(const TwoQubitCircuit& circuit);

/// Noise-free dense statevector evaluation of <sigma_a (x) sigma_b>; the
/// built-in reference every recombined estimate is cross-checked against.
double dense_reference_expectation(const TwoQubitCircuit& circuit);

}  // namespace vcz
