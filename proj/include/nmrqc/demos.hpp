// Copyright 2026 The nmrqc Authors
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

/**
 * @file demos.hpp
 * @brief Built-in two-qubit algorithms: Deutsch and ancilla-free Grover.
 *
 * Hadamards are replaced by pi/2 y rotations, the usual NMR substitute.
 */
#pragma once

#include <string>
#include <vector>

#include "nmrqc/circuit.hpp"
#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/molecule_io.hpp"

namespace nmrqc {

struct DemoCase {
  std::string variant;
  Circuit circuit;
  std::string expected;  // per-qubit answer, '?' where the value is not part of the answer
};

/// Two homonuclear protons, J = 7.143 Hz, offsets +-400 Hz at 11.74 T (500 MHz).
inline Molecule demo_molecule() {
  const auto h = NucleusRegistry::standard().at("H1");
  std::vector<Spin> spins{{h, 400.0, 5.0, 1.0}, {h, -400.0, 5.0, 1.0}};
  CouplingTable couplings(2);
  couplings.set(0, 1, 7.143);
  return {"demo-2H", SpinSystem(std::move(spins), std::move(couplings), 11.74), 300.0};
}

/// Qubit 0 holds x, qubit 1 the oracle target y. Qubit 0 ends in |0> for a
/// constant f and |1> for a balanced f.
inline Circuit deutsch_circuit(const std::string& oracle) {
  const double half = constants::pi / 2.0;
  Circuit c(2);
  c.add(Gate::rx(1, constants::pi));
  c.add(Gate::ry(0, half));
  c.add(Gate::ry(1, half));
  if (oracle == "constant0") {
  } else if (oracle == "constant1") {
    c.add(Gate::rx(1, constants::pi));
  } else if (oracle == "balanced_x") {
    c.add(Gate::cnot(0, 1));
  } else if (oracle == "balanced_not_x") {
    c.add(Gate::cnot(0, 1));
    c.add(Gate::rx(1, constants::pi));
  } else {
    throw ParseError("unknown Deutsch oracle '" + oracle + "'");
  }
  c.add(Gate::ry(0, -half));
  return c;
}

/// One Grover iteration on two qubits; the oracle is a conditional phase, so
/// no ancilla is needed. `marked` is a two-character bit string.
inline Circuit grover2_circuit(const std::string& marked) {
  if (marked.size() != 2 || marked.find_first_not_of("01") != std::string::npos) {
    throw ParseError("grover2 marked item must be two bits, got '" + marked + "'");
  }
  const double half = constants::pi / 2.0;
  Circuit c(2);
  c.add(Gate::ry(0, half));
  c.add(Gate::ry(1, half));
  for (int q = 0; q < 2; ++q)
    if (marked[q] == '0') c.add(Gate::rx(q, constants::pi));
  c.add(Gate::cz(0, 1));
  for (int q = 0; q < 2; ++q)
    if (marked[q] == '0') c.add(Gate::rx(q, constants::pi));
  // Inversion about the mean.
  c.add(Gate::ry(0, -half));
  c.add(Gate::ry(1, -half));
  c.add(Gate::rx(0, constants::pi));
  c.add(Gate::rx(1, constants::pi));
  c.add(Gate::cz(0, 1));
  c.add(Gate::rx(0, constants::pi));
  c.add(Gate::rx(1, constants::pi));
  c.add(Gate::ry(0, half));
  c.add(Gate::ry(1, half));
  return c;
}

inline std::vector<std::string> demo_names() { return {"deutsch", "grover2"}; }

inline std::vector<DemoCase> demo_cases(const std::string& name) {
  std::vector<DemoCase> out;
  if (name == "deutsch") {
    out.push_back({"constant0", deutsch_circuit("constant0"), "0?"});
    out.push_back({"constant1", deutsch_circuit("constant1"), "0?"});
    out.push_back({"balanced_x", deutsch_circuit("balanced_x"), "1?"});
    out.push_back({"balanced_not_x", deutsch_circuit("balanced_not_x"), "1?"});
  } else if (name == "grover2") {
    for (const char* m : {"00", "01", "10", "11"}) out.push_back({m, grover2_circuit(m), m});
  } else {
    throw ParseError("unknown demo '" + name + "'");
  }
  return out;
}

}  // namespace nmrqc
