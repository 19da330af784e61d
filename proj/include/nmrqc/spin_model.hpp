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
 * @file spin_model.hpp
 * @brief Nuclei, spin systems, coupling graphs and the weak-coupling
 * Hamiltonian of a liquid-state molecule.
 *
 * Basis conventions used throughout the library: qubit q of an n-spin system
 * is bit (n-1-q) of a basis index, so qubit 0 is the most significant bit.
 * Bit value 0 is the m = +1/2 (spin up) state, bit value 1 is m = -1/2.
 * Frequencies are stored in Hz; Hamiltonians are returned in rad/s.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct Nucleus {
  std::string species;
  double gamma = 0.0;  // rad s^-1 T^-1
};

/// Species lookup. `standard()` carries the five spin-1/2 nuclei used for
/// liquid-state quantum computing; callers may add their own.
class NucleusRegistry {
 public:
  static NucleusRegistry standard() {
    NucleusRegistry r;
    r.add({"H1", constants::gamma::h1});
    r.add({"C13", constants::gamma::c13});
    r.add({"N15", constants::gamma::n15});
    r.add({"F19", constants::gamma::f19});
    r.add({"P31", constants::gamma::p31});
    return r;
  }

  void add(Nucleus nucleus) {
    if (!std::isfinite(nucleus.gamma) || nucleus.gamma == 0.0) {
      throw PhysicsError("nucleus " + nucleus.species + " needs a finite nonzero gamma");
    }
    if (nuclei_.contains(nucleus.species)) {
      throw PhysicsError("nucleus " + nucleus.species + " already registered");
    }
    nuclei_.emplace(nucleus.species, nucleus);
  }

  bool contains(const std::string& species) const { return nuclei_.contains(species); }

  const Nucleus& at(const std::string& species) const {
    auto it = nuclei_.find(species);
    if (it == nuclei_.end()) throw ParseError("unknown nucleus species '" + species + "'");
    return it->second;
  }

  std::vector<std::string> species() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : nuclei_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, Nucleus> nuclei_;
};

inline constexpr double kNoRelaxation = std::numeric_limits<double>::infinity();

struct Spin {
  Nucleus nucleus;
  double offset_hz = 0.0;  // rotating-frame offset from the species carrier
  double t1_s = kNoRelaxation;
  double t2_s = kNoRelaxation;

  bool relaxes() const { return std::isfinite(t1_s) || std::isfinite(t2_s); }
};

/// Symmetric scalar (J) and residual dipolar (D) coupling tables, Hz.
class CouplingTable {
 public:
  CouplingTable() = default;
  explicit CouplingTable(int n) : j_hz_(Eigen::MatrixXd::Zero(n, n)), d_hz_(Eigen::MatrixXd::Zero(n, n)) {}

  int size() const { return static_cast<int>(j_hz_.rows()); }

  void set(int i, int k, double j_hz, double d_hz = 0.0) {
    if (i == k) throw PhysicsError("a spin cannot couple to itself");
    if (i < 0 || k < 0 || i >= size() || k >= size()) throw PhysicsError("coupling index out of range");
    j_hz_(i, k) = j_hz_(k, i) = j_hz;
    d_hz_(i, k) = d_hz_(k, i) = d_hz;
  }

  double j(int i, int k) const { return j_hz_(i, k); }
  double d(int i, int k) const { return d_hz_(i, k); }
  /// Coupling strength that enters the Hamiltonian: J + 2D.
  double effective(int i, int k) const { return j_hz_(i, k) + 2.0 * d_hz_(i, k); }

 private:
  Eigen::MatrixXd j_hz_;
  Eigen::MatrixXd d_hz_;
};

class SpinSystem {
 public:
  SpinSystem(std::vector<Spin> spins, CouplingTable couplings, double field_tesla)
      : spins_(std::move(spins)), couplings_(std::move(couplings)), field_tesla_(field_tesla) {
    if (spins_.empty()) throw PhysicsError("a spin system needs at least one spin");
    if (spins_.size() > 16) throw PhysicsError("more than 16 spins cannot be simulated densely");
    if (couplings_.size() == 0) couplings_ = CouplingTable(size());
    if (couplings_.size() != size()) throw PhysicsError("coupling table size does not match spin count");
    if (!(field_tesla_ >= 0.0)) throw PhysicsError("field must be non-negative");
    for (const auto& s : spins_) {
      if (!(s.t1_s > 0.0) || !(s.t2_s > 0.0)) throw PhysicsError("relaxation times must be positive");
      if (s.t2_s > 2.0 * s.t1_s) throw PhysicsError("T2 may not exceed 2*T1");
    }
  }

  int size() const { return static_cast<int>(spins_.size()); }
  std::size_t dimension() const { return std::size_t{1} << spins_.size(); }
  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(int i) const { return spins_.at(i); }
  const CouplingTable& couplings() const { return couplings_; }
  double field_tesla() const { return field_tesla_; }

  bool same_species(int i, int k) const { return spins_[i].nucleus.species == spins_[k].nucleus.species; }

  bool heteronuclear() const {
    for (int i = 0; i < size(); ++i)
      for (int k = i + 1; k < size(); ++k)
        if (same_species(i, k)) return false;
    return true;
  }

 private:
  std::vector<Spin> spins_;
  CouplingTable couplings_;
  double field_tesla_;
};

/// Magnetic quantum number (+1/2 or -1/2) of qubit `q` in basis state `index`.
inline double magnetic_number(std::size_t index, int q, int n) {
  return ((index >> (n - 1 - q)) & 1U) ? -0.5 : 0.5;
}

/// Larmor frequency nu = gamma B / 2 pi, Hz. Negative gamma gives a negative frequency.
inline double larmor_frequency(double gamma, double field_tesla) {
  if (field_tesla < 0.0) throw PhysicsError("field must be non-negative");
  return gamma * field_tesla / (2.0 * constants::pi);
}

/// Diagonal of the weak-coupling Hamiltonian in rad/s:
/// sum_i w_i m_i + sum_{i<k} pi (J_ik + 2 D_ik) 2 m_i m_k with w_i = 2 pi offset_i.
inline RealVector hamiltonian_diagonal(const SpinSystem& system) {
  const int n = system.size();
  const std::size_t dim = system.dimension();
  RealVector diag(static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mi = magnetic_number(a, i, n);
      e += 2.0 * constants::pi * system.spin(i).offset_hz * mi;
      for (int k = i + 1; k < n; ++k) {
        e += constants::pi * system.couplings().effective(i, k) * 2.0 * mi * magnetic_number(a, k, n);
      }
    }
    diag(static_cast<Eigen::Index>(a)) = e;
  }
  return diag;
}

/// Full N x N rotating-frame Hamiltonian (diagonal in the computational basis), rad/s.
inline Matrix build_hamiltonian(const SpinSystem& system) {
  return hamiltonian_diagonal(system).cast<Complex>().asDiagonal();
}

struct WeakCouplingPair {
  int i = 0;
  int k = 0;
  double ratio = 0.0;  // |2 pi J_eff| / |w_i - w_k|
  bool pass = true;
};

struct WeakCouplingReport {
  std::vector<WeakCouplingPair> pairs;
  bool all_pass() const {
    for (const auto& p : pairs)
      if (!p.pass) return false;
    return true;
  }
};

inline constexpr double kWeakCouplingLimit = 0.1;

/// Checks |2 pi J_ik| << |w_i - w_k| for every pair. Advisory only; the
/// Hamiltonian is always built in the weak-coupling form.
inline WeakCouplingReport weak_coupling_check(const SpinSystem& system) {
  WeakCouplingReport report;
  const int n = system.size();
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      WeakCouplingPair p{i, k, 0.0, true};
      const double coupling = std::abs(2.0 * constants::pi * system.couplings().effective(i, k));
      const double split = std::abs(2.0 * constants::pi * (system.spin(i).offset_hz - system.spin(k).offset_hz));
      if (coupling == 0.0) {
        p.ratio = 0.0;
      } else if (!system.same_species(i, k)) {
        // Different carriers: the true Larmor difference is MHz, so the limit always holds.
        const double dnu = std::abs(larmor_frequency(system.spin(i).nucleus.gamma, system.field_tesla()) -
                                    larmor_frequency(system.spin(k).nucleus.gamma, system.field_tesla()));
        if (dnu > 0.0) {
          p.ratio = coupling / (2.0 * constants::pi * dnu);
        } else {
          p.ratio = split > 0.0 ? coupling / split : std::numeric_limits<double>::infinity();
        }
      } else if (split == 0.0) {
        p.ratio = std::numeric_limits<double>::infinity();
      } else {
        p.ratio = coupling / split;
      }
      p.pass = p.ratio < kWeakCouplingLimit;
      report.pairs.push_back(p);
    }
  }
  return report;
}

struct CouplingGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // i < k
  std::vector<std::vector<int>> adjacency;

  bool adjacent(int i, int k) const {
    for (int v : adjacency.at(i))
      if (v == k) return true;
    return false;
  }
};

/// Edge (i,k) iff |J_ik + 2 D_ik| > threshold_hz.
inline CouplingGraph coupling_graph(const SpinSystem& system, double threshold_hz = 0.0) {
  if (threshold_hz < 0.0) throw PhysicsError("coupling threshold must be non-negative");
  CouplingGraph g;
  g.vertices = system.size();
  g.adjacency.resize(static_cast<std::size_t>(g.vertices));
  for (int i = 0; i < g.vertices; ++i) {
    for (int k = i + 1; k < g.vertices; ++k) {
      if (std::abs(system.couplings().effective(i, k)) > threshold_hz) {
        g.edges.emplace_back(i, k);
        g.adjacency[i].push_back(k);
        g.adjacency[k].push_back(i);
      }
    }
  }
  return g;
}

}  // namespace nmrqc
