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

#include "circuit.hpp"

#include "config.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace vcz {

namespace {

Gate gate_from_json(const Json& op) {
  const std::string name = op.at("gate").get<std::string>();
  const bool has_theta = op.contains("theta");
  const auto theta = [&] {
    if (!has_theta) {
      throw std::invalid_argument("gate \"" + name + "\" requires \"theta\"");
    }
    return op["theta"].get<double>();
  };
  const auto no_theta = [&](const Gate& g) {
    if (has_theta) {
      throw std::invalid_argument("gate \"" + name + "\" takes no \"theta\"");
    }
    return g;
  };
  if (name == "rx") return rx(theta());
  if (name == "ry") return ry(theta());
  if (name == "rz") return rz(theta());
  if (name == "h") return no_theta(gate_h());
  if (name == "i") return no_theta(gate_i());
  if (name == "z") return no_theta(gate_z());
  if (name == "x") return no_theta(rx(std::numbers::pi));
  if (name == "y") return no_theta(ry(std::numbers::pi));
  if (name == "cz") return no_theta(gate_cz());
  throw std::invalid_argument("unknown gate \"" + name + "\"");
}

Eigen::Vector2cd fiducial_statevector(Fiducial f) {
  using namespace std::complex_literals;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  switch (f) {
    case Fiducial::Zero: return {1.0, 0.0};
    case Fiducial::One: return {0.0, 1.0};
    case Fiducial::Plus: return {inv_sqrt2, inv_sqrt2};
    case Fiducial::IPlus: return {inv_sqrt2, 1i * inv_sqrt2};
  }
  throw std::invalid_argument("bad fiducial");
}

Eigen::Matrix4cd embed_on(int qubit, const Eigen::Matrix2cd& u) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return qubit == 0 ? Eigen::Matrix4cd(Eigen::kroneckerProduct(u, id))
                    : Eigen::Matrix4cd(Eigen::kroneckerProduct(id, u));
}

}  // namespace

void TwoQubitCircuit::validate() const {
  int cz_count = 0;
  for (const CircuitOp& op : operations) {
    if (op.gate.kind == GateKind::CZ) {
      ++cz_count;
      continue;
    }
    if (gate_qubit_count(op.gate.kind) != 1) {
      throw std::invalid_argument("only CZ is allowed as a two-qubit gate");
    }
    if (op.qubit != 0 && op.qubit != 1) {
      throw std::invalid_argument("gate qubit must be 0 or 1");
    }
    if (!std::isfinite(op.gate.theta)) {
      throw std::invalid_argument("non-finite gate angle");
    }
  }
  if (cz_count != 1) {
    throw std::invalid_argument("circuit must contain exactly one CZ, found " +
                                std::to_string(cz_count));
  }
}

TwoQubitCircuit circuit_from_json(const Json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("circuit must be a JSON object");
  }
  const std::set<std::string> known = {"schema_version", "input", "operations",
                                       "observable"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) {
      throw std::invalid_argument("unknown circuit field \"" + key + "\"");
    }
  }
  if (!j.contains("schema_version")) {
    throw SchemaError("circuit is missing \"schema_version\"");
  }
  if (j["schema_version"].get<int>() != kSchemaVersion) {
    throw SchemaError("unsupported circuit schema_version");
  }
  TwoQubitCircuit circuit;
  const Json& input = j.at("input");
  const Json& observable = j.at("observable");
  if (!input.is_array() || input.size() != 2 || !observable.is_array() ||
      observable.size() != 2) {
    throw std::invalid_argument("input and observable must be 2-element arrays");
  }
  for (int q = 0; q < 2; ++q) {
    circuit.input[q] = fiducial_from_name(input[q].get<std::string>());
    circuit.observable[q] = pauli_from_name(observable[q].get<std::string>());
  }
  for (const Json& op : j.at("operations")) {
    CircuitOp parsed;
    parsed.gate = gate_from_json(op);
    if (parsed.gate.kind != GateKind::CZ) {
      parsed.qubit = op.at("qubit").get<int>();
    } else if (op.contains("qubit")) {
      throw std::invalid_argument("the CZ acts on both qubits; omit \"qubit\"");
    }
    circuit.operations.push_back(parsed);
  }
  circuit.validate();
  return circuit;
}

TwoQubitCircuit load_circuit_file(const std::filesystem::path& path) {
  return circuit_from_json(read_json_file(path));
}

Json circuit_to_json(const TwoQubitCircuit& circuit) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["input"] = {fiducial_name(circuit.input[0]), fiducial_name(circuit.input[1])};
  Json ops = Json::array();
  for (const CircuitOp& op : circuit.operations) {
    Json entry;
    switch (op.gate.kind) {
      case GateKind::RX: entry["gate"] = "rx"; break;
      case GateKind::RY: entry["gate"] = "ry"; break;
      case GateKind::RZ: entry["gate"] = "rz"; break;
      case GateKind::H: entry["gate"] = "h"; break;
      case GateKind::I: entry["gate"] = "i"; break;
      case GateKind::Z: entry["gate"] = "z"; break;
      case GateKind::CZ: entry["gate"] = "cz"; break;
    }
    if (op.gate.kind != GateKind::CZ) {
      entry["qubit"] = op.qubit;
      if (gate_qubit_count(op.gate.kind) == 1 &&
          (op.gate.kind == GateKind::RX || op.gate.kind == GateKind::RY ||
           op.gate.kind == GateKind::RZ)) {
        entry["theta"] = op.gate.theta;
      }
    }
    ops.push_back(std::move(entry));
  }
  j["operations"] = std::move(ops);
  j["observable"] = {pauli_name(circuit.observable[0]),
                     pauli_name(circuit.observable[1])};
  return j;
}

SplitCircuit split_at_cz(const TwoQubitCircuit& circuit) {
  circuit.validate();
  SplitCircuit split;
  split.a.input = circuit.input[0];
  split.b.input = circuit.input[1];
  split.a.observable = circuit.observable[0];
  split.b.observable = circuit.observable[1];
  bool after_cz = false;
  for (const CircuitOp& op : circuit.operations) {
    if (op.gate.kind == GateKind::CZ) {
      after_cz = true;
      continue;
    }
    CzSideTemplate& side = op.qubit == 0 ? split.a : split.b;
    (after_cz ? side.post : side.pre).push_back(op.gate);
  }
  return split;
}

double dense_reference_expectation(const TwoQubitCircuit& circuit) {
  circuit.validate();
  Eigen::Vector4cd psi =
      Eigen::kroneckerProduct(fiducial_statevector(circuit.input[0]),
                              fiducial_statevector(circuit.input[1]));
  for (const CircuitOp& op : circuit.operations) {
    if (op.gate.kind == GateKind::CZ) {
      psi = gate_unitary(op.gate) * psi;
    } else {
      psi = embed_on(op.qubit, Eigen::Matrix2cd(gate_unitary(op.gate))) * psi;
    }
  }
  const Eigen::Matrix4cd q =
      Eigen::kroneckerProduct(pauli_matrix(circuit.observable[0]),
                              pauli_matrix(circuit.observable[1]));
  return (psi.adjoint() * q * psi).value().real();
}

}  // namespace vcz
