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
 * @file circuit.hpp
 * @brief Gate-level circuits, their text format, and reference unitaries.
 *
 * Circuit text format, one gate per line, '#' starts a comment:
 *
 *     RX q angle        RY q angle        RZ q angle
 *     CPHASE a b angle  CZ a b            CNOT control target
 *     SWAP a b          TOFFOLI c1 c2 target
 *
 * Angles are in radians. Keywords are case-insensitive.
 */
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nmrqc/density_matrix.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

enum class GateKind { rx, ry, rz, cphase, cnot, cz, swap, toffoli };

inline const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::rx: return "RX";
    case GateKind::ry: return "RY";
    case GateKind::rz: return "RZ";
    case GateKind::cphase: return "CPHASE";
    case GateKind::cnot: return "CNOT";
    case GateKind::cz: return "CZ";
    case GateKind::swap: return "SWAP";
    case GateKind::toffoli: return "TOFFOLI";
  }
  return "?";
}

inline int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::rx:
    case GateKind::ry:
    case GateKind::rz: return 1;
    case GateKind::toffoli: return 3;
    default: return 2;
  }
}

inline bool gate_has_angle(GateKind kind) {
  return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::rz || kind == GateKind::cphase;
}

struct Gate {
  GateKind kind = GateKind::rx;
  std::vector<int> targets;
  double angle = 0.0;

  static Gate rx(int q, double a) { return {GateKind::rx, {q}, a}; }
  static Gate ry(int q, double a) { return {GateKind::ry, {q}, a}; }
  static Gate rz(int q, double a) { return {GateKind::rz, {q}, a}; }
  static Gate cphase(int a, int b, double phi) { return {GateKind::cphase, {a, b}, phi}; }
  static Gate cnot(int c, int t) { return {GateKind::cnot, {c, t}, 0.0}; }
  static Gate cz(int a, int b) { return {GateKind::cz, {a, b}, 0.0}; }
  static Gate swap(int a, int b) { return {GateKind::swap, {a, b}, 0.0}; }
  static Gate toffoli(int c1, int c2, int t) { return {GateKind::toffoli, {c1, c2, t}, 0.0}; }
};

class Circuit {
 public:
  explicit Circuit(int qubits = 0) : qubits_(qubits) {}

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  Circuit& append(const Circuit& other) {
    for (const auto& g : other.gates()) add(g);
    return *this;
  }

  int qubits() const { return qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  bool empty() const { return gates_.empty(); }

 private:
  void validate(const Gate& g) const {
    if (static_cast<int>(g.targets.size()) != gate_arity(g.kind)) {
      throw ParseError(std::string(gate_name(g.kind)) + " expects " + std::to_string(gate_arity(g.kind)) +
                       " targets");
    }
    if (!std::isfinite(g.angle)) throw ParseError("gate angle must be finite");
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      if (g.targets[i] < 0 || g.targets[i] >= qubits_) {
        throw ParseError("target " + std::to_string(g.targets[i]) + " out of range for " +
                         std::to_string(qubits_) + " qubits");
      }
      for (std::size_t j = 0; j < i; ++j)
        if (g.targets[i] == g.targets[j]) throw ParseError("repeated target in " + std::string(gate_name(g.kind)));
    }
  }

  int qubits_;
  std::vector<Gate> gates_;
};

inline Circuit parse_circuit(std::istream& in, int qubits) {
  Circuit circuit(qubits);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) { return std::toupper(c); });
    const auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    GateKind kind;
    bool found = false;
    for (GateKind k : {GateKind::rx, GateKind::ry, GateKind::rz, GateKind::cphase, GateKind::cnot, GateKind::cz,
                       GateKind::swap, GateKind::toffoli}) {
      if (word == gate_name(k)) {
        kind = k;
        found = true;
      }
    }
    if (!found) throw ParseError(where() + "unknown gate '" + word + "'");
    Gate g{kind, {}, 0.0};
    for (int a = 0; a < gate_arity(kind); ++a) {
      std::string tok;
      if (!(ls >> tok)) throw ParseError(where() + "missing target");
      try {
        std::size_t used = 0;
        g.targets.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(where() + "bad target '" + tok + "'");
      }
    }
    if (gate_has_angle(kind)) {
      std::string tok;
      if (!(ls >> tok)) throw ParseError(where() + "missing angle");
      try {
        std::size_t used = 0;
        g.angle = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(where() + "bad angle '" + tok + "'");
      }
    }
    std::string extra;
    if (ls >> extra) throw ParseError(where() + "unexpected token '" + extra + "'");
    try {
      circuit.add(std::move(g));
    } catch (const ParseError& e) {
      throw ParseError(where() + e.what());
    }
  }
  return circuit;
}

inline Circuit parse_circuit(const std::string& text, int qubits) {
  std::istringstream in(text);
  return parse_circuit(in, qubits);
}

/// Reads a circuit file for a `qubits`-qubit register.
inline Circuit circuit_parse(const std::string& path, int qubits) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open circuit file " + path);
  return parse_circuit(in, qubits);
}

inline std::string circuit_to_text(const Circuit& circuit) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& g : circuit.gates()) {
    out << gate_name(g.kind);
    for (int t : g.targets) out << ' ' << t;
    if (gate_has_angle(g.kind)) out << ' ' << g.angle;
    out << '\n';
  }
  return out.str();
}

/// Exact unitary of one gate on an n-qubit register, built directly from its
/// action on basis states. Used as the independent reference for compiled
/// pulse sequences.
inline Matrix gate_unitary(const Gate& g, int n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  const auto bit = [n](int q) { return Eigen::Index{1} << (n - 1 - q); };
  Matrix u = Matrix::Zero(dim, dim);
  const Complex i{0.0, 1.0};
  switch (g.kind) {
    case GateKind::rx:
    case GateKind::ry:
    case GateKind::rz: {
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      Matrix2 m;
      if (g.kind == GateKind::rx) m << c, -i * s, -i * s, c;
      if (g.kind == GateKind::ry) m << c, -s, s, c;
      if (g.kind == GateKind::rz) m << std::polar(1.0, -g.angle / 2.0), 0.0, 0.0, std::polar(1.0, g.angle / 2.0);
      return embed(m, g.targets[0], n);
    }
    case GateKind::cphase:
    case GateKind::cz: {
      const double phi = g.kind == GateKind::cz ? constants::pi : g.angle;
      for (Eigen::Index a = 0; a < dim; ++a) {
        const bool both = (a & bit(g.targets[0])) && (a & bit(g.targets[1]));
        u(a, a) = both ? std::polar(1.0, phi) : Complex{1.0, 0.0};
      }
      return u;
    }
    case GateKind::cnot:
      for (Eigen::Index a = 0; a < dim; ++a) u((a & bit(g.targets[0])) ? a ^ bit(g.targets[1]) : a, a) = 1.0;
      return u;
    case GateKind::swap:
      for (Eigen::Index a = 0; a < dim; ++a) {
        const bool b0 = a & bit(g.targets[0]);
        const bool b1 = a & bit(g.targets[1]);
        const Eigen::Index out = b0 == b1 ? a : a ^ bit(g.targets[0]) ^ bit(g.targets[1]);
        u(out, a) = 1.0;
      }
      return u;
    case GateKind::toffoli:
      for (Eigen::Index a = 0; a < dim; ++a) {
        const bool fire = (a & bit(g.targets[0])) && (a & bit(g.targets[1]));
        u(fire ? a ^ bit(g.targets[2]) : a, a) = 1.0;
      }
      return u;
  }
  return u;
}

/// Product of gate unitaries in circuit order.
inline Matrix circuit_unitary(const Circuit& circuit) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << circuit.qubits());
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& g : circuit.gates()) u = gate_unitary(g, circuit.qubits()) * u;
  return u;
}

}  // namespace nmrqc
