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
 * @file init.hpp
 * @brief Thermal equilibrium, pseudo-pure state preparation and the
 * polarization (epsilon) formulas.
 *
 * A pseudo-pure state is rho = (1 - eps) 1/N + eps |psi><psi|.
 */
#pragma once

#include <cmath>
#include <future>
#include <map>
#include <string>
#include <vector>

#include "nmrqc/circuit.hpp"
#include "nmrqc/compiler.hpp"
#include "nmrqc/constants.hpp"
#include "nmrqc/density_matrix.hpp"
#include "nmrqc/engine.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/sequence_sim.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

struct ThermalConditions {
  double temperature_k = 300.0;
  double field_tesla = 11.74;

  void validate() const {
    if (!(temperature_k > 0.0)) throw PhysicsError("temperature must be positive");
    if (!(field_tesla >= 0.0)) throw PhysicsError("field must be non-negative");
  }
};

/// Equilibrium <sigma_z> = tanh(h nu / 2kT) of each spin.
inline std::vector<double> equilibrium_polarizations(const SpinSystem& system, const ThermalConditions& conditions) {
  conditions.validate();
  std::vector<double> p;
  for (const auto& s : system.spins()) {
    const double nu = larmor_frequency(s.nucleus.gamma, conditions.field_tesla);
    p.push_back(std::tanh(constants::planck * nu / (2.0 * constants::boltzmann * conditions.temperature_k)));
  }
  return p;
}

/// Boltzmann state of the Zeeman Hamiltonian (full Larmor frequencies,
/// couplings neglected). Diagonal, a product over spins.
inline DensityMatrix thermal_state(const SpinSystem& system, const ThermalConditions& conditions) {
  const auto p = equilibrium_polarizations(system, conditions);
  const int n = system.size();
  const auto dim = static_cast<Eigen::Index>(system.dimension());
  Matrix rho = Matrix::Zero(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    double pop = 1.0;
    for (int q = 0; q < n; ++q) pop *= 0.5 * (1.0 + 2.0 * magnetic_number(static_cast<std::size_t>(a), q, n) * p[q]);
    rho(a, a) = pop;
  }
  return {std::move(rho), DensityMatrix::Unchecked{}};
}

struct EpsilonReport {
  double epsilon_exact = 0.0;
  double epsilon_hightemp = 0.0;
  int n = 0;
  double nu_hz = 0.0;
  double temperature_k = 0.0;
};

/// Largest pseudo-pure fraction extractable from equilibrium for n
/// homonuclear spins: 2 sinh(n x/2) / (2^n cosh^n(x/2)), x = h nu / kT, and
/// its high-temperature form n x / 2^n.
inline EpsilonReport epsilon_report(int n, double nu_hz, double temperature_k) {
  if (n < 1) throw PhysicsError("epsilon_report needs n >= 1");
  if (!(nu_hz > 0.0) || !(temperature_k > 0.0)) throw PhysicsError("epsilon_report needs nu > 0 and T > 0");
  const double x = constants::planck * nu_hz / (constants::boltzmann * temperature_k);
  EpsilonReport r;
  r.n = n;
  r.nu_hz = nu_hz;
  r.temperature_k = temperature_k;
  r.epsilon_exact = 2.0 * std::sinh(n * x / 2.0) / (std::pow(2.0, n) * std::pow(std::cosh(x / 2.0), n));
  r.epsilon_hightemp = n * x / std::pow(2.0, n);
  return r;
}

struct SystemEpsilonBound {
  std::map<std::string, EpsilonReport> per_species;  // homonuclear formula per species
  bool heteronuclear = false;  // combined value lies outside the homonuclear formula
  double population_spread = 0.0;  // max - min thermal population
};

inline SystemEpsilonBound epsilon_bound(const SpinSystem& system, const ThermalConditions& conditions) {
  conditions.validate();
  SystemEpsilonBound b;
  std::map<std::string, int> counts;
  for (const auto& s : system.spins()) ++counts[s.nucleus.species];
  for (const auto& [species, count] : counts) {
    for (const auto& s : system.spins()) {
      if (s.nucleus.species != species) continue;
      const double nu = std::abs(larmor_frequency(s.nucleus.gamma, conditions.field_tesla));
      if (nu > 0.0) b.per_species[species] = epsilon_report(count, nu, conditions.temperature_k);
      break;
    }
  }
  b.heteronuclear = counts.size() > 1;
  const Eigen::VectorXd diag = thermal_state(system, conditions).matrix().diagonal().real();
  b.population_spread = diag.maxCoeff() - diag.minCoeff();
  return b;
}

/// Probability that a pseudo-pure computer returns the right answer.
inline double p_correct(double epsilon, std::size_t dimension) {
  if (epsilon < 0.0 || epsilon > 1.0 || dimension < 2) throw PhysicsError("p_correct needs 0 <= eps <= 1 and N >= 2");
  const double n = static_cast<double>(dimension);
  return epsilon + (1.0 - epsilon) / n;
}

inline double p_wrong(double epsilon, std::size_t dimension) {
  if (epsilon < 0.0 || epsilon > 1.0 || dimension < 2) throw PhysicsError("p_wrong needs 0 <= eps <= 1 and N >= 2");
  const double n = static_cast<double>(dimension);
  return (n - 1.0) * (1.0 - epsilon) / n;
}

inline constexpr double kStructureTolerance = 1e-8;

struct PseudoPureCheck {
  bool ok = false;
  double epsilon = 0.0;
  double worst_deviation = 0.0;  // largest off-diagonal or non-ground population spread
};

/// Tests rho against (1 - eps) 1/N + eps |0..0><0..0|.
inline PseudoPureCheck check_pseudopure(const DensityMatrix& rho, double tol = kStructureTolerance) {
  const Eigen::Index dim = rho.dim();
  PseudoPureCheck c;
  double worst = 0.0;
  for (Eigen::Index b = 0; b < dim; ++b)
    for (Eigen::Index a = 0; a < dim; ++a)
      if (a != b) worst = std::max(worst, std::abs(rho(a, b)));
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index a = 1; a < dim; ++a) {
    lo = std::min(lo, rho(a, a).real());
    hi = std::max(hi, rho(a, a).real());
  }
  worst = std::max(worst, hi - lo);
  c.worst_deviation = worst;
  c.ok = worst < tol;
  c.epsilon = (static_cast<double>(dim) * rho(0, 0).real() - 1.0) / static_cast<double>(dim - 1);
  return c;
}

/// eps of a ground-state pseudo-pure density matrix; StructureError otherwise.
inline double extract_epsilon(const DensityMatrix& rho, double tol = kStructureTolerance) {
  const auto c = check_pseudopure(rho, tol);
  if (!c.ok) {
    throw StructureError("state is not pseudo-pure (worst deviation " + std::to_string(c.worst_deviation) + ")",
                         c.worst_deviation);
  }
  return c.epsilon;
}

/// (N <psi|rho|psi> - 1) / (N - 1): the pseudo-pure fraction along |psi>.
inline double epsilon_along(const DensityMatrix& rho, const Vector& psi) {
  const double n = static_cast<double>(rho.dim());
  return (n * fidelity_with_pure(rho, psi) - 1.0) / (n - 1.0);
}

/// Builds (1 - eps) 1/N + eps |0..0><0..0| directly, standing in for any
/// polarization-enhancement technique.
inline DensityMatrix polarization_override(int n, double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) throw PhysicsError("epsilon must lie in [0, 1]");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix m = Matrix::Identity(dim, dim) * ((1.0 - epsilon) / static_cast<double>(dim));
  m(0, 0) += epsilon;
  return {std::move(m), DensityMatrix::Unchecked{}};
}

inline DensityMatrix polarization_override(const SpinSystem& system, double epsilon) {
  return polarization_override(system.size(), epsilon);
}

// ---------------------------------------------------------------------------
// Spatial averaging (gradients), two spins

/// Fixed two-spin gradient sequence. With p_a the smaller and p_b the larger
/// equilibrium polarization:
///   1. rotate b by alpha about x, crush: scales b's z terms by cos(alpha);
///   2. rotate a by +-pi/4 about x, let the coupling act for 1/(2|J|) with all
///      offsets refocused, rotate a about y, crush: moves half of a's Zeeman
///      order into two-spin order and vice versa.
/// alpha is chosen so the three z terms come out equal, which is pseudo-pure.
inline PulseSequence spatial_preparation_sequence(const SpinSystem& system, const ThermalConditions& conditions,
                                                  const CompilerOptions& options = {},
                                                  CrushMode crush = CrushMode::physical) {
  if (system.size() != 2) {
    throw PhysicsError("gradient preparation is built in for 2 spins only; use temporal averaging");
  }
  const double j_eff = system.couplings().effective(0, 1);
  if (j_eff == 0.0) throw PhysicsError("gradient preparation needs the two spins to be coupled");
  const auto p = equilibrium_polarizations(system, conditions);
  const int a = std::abs(p[0]) <= std::abs(p[1]) ? 0 : 1;
  const int b = 1 - a;

  const double g = p[a] >= 0.0 ? 0.5 : -0.5;  // g p_a = |p_a| / 2
  double cos_alpha = 0.0;
  if (p[b] != 0.0) cos_alpha = g * p[a] / (p[b] * (1.0 - g * p[a]));
  const double alpha = std::acos(std::clamp(cos_alpha, -1.0, 1.0));
  const double beta = g > 0.0 ? constants::pi / 4.0 : -constants::pi / 4.0;
  const double s_j = j_eff > 0.0 ? 1.0 : -1.0;
  const double phi = s_j * (beta - constants::pi / 2.0);

  PulseSequence seq(2);
  seq.append(rotation_events(system, {b}, alpha, 0.0, options, "scale"));
  seq.add(Crush{crush}, "crush");
  seq.append(rotation_events(system, {a}, beta, 0.0, options, "transfer"));
  const auto schedule = refocusing_schedule(system, RetainedCoupling{0, 1, +1}, 1.0 / (2.0 * std::abs(j_eff)));
  seq.append(schedule_events(system, schedule, options));
  seq.append(rotation_events(system, {a}, phi, constants::pi / 2.0, options, "transfer"));
  seq.add(Crush{crush}, "crush");
  return seq;
}

/// Runs the gradient sequence on the thermal state (ideal pulses, no relaxation).
inline DensityMatrix prepare_pseudopure_spatial(const SpinSystem& system, const ThermalConditions& conditions,
                                                const CompilerOptions& options = {},
                                                CrushMode crush = CrushMode::physical) {
  const auto seq = spatial_preparation_sequence(system, conditions, options, crush);
  return simulate_sequence(seq, thermal_state(system, conditions), system).final_state;
}

/// Same sequence applied to an arbitrary starting state.
inline DensityMatrix prepare_pseudopure_spatial(const SpinSystem& system, const ThermalConditions& conditions,
                                                const DensityMatrix& input, const CompilerOptions& options = {},
                                                CrushMode crush = CrushMode::physical) {
  const auto seq = spatial_preparation_sequence(system, conditions, options, crush);
  return simulate_sequence(seq, input, system).final_state;
}

// ---------------------------------------------------------------------------
// Temporal averaging

/// Primitive polynomial of degree n over GF(2), as a bit mask of its
/// coefficients below x^n.
inline unsigned primitive_polynomial_low_terms(int n) {
  switch (n) {
    case 2: return 0b11;           // x^2 + x + 1
    case 3: return 0b011;          // x^3 + x + 1
    case 4: return 0b0011;         // x^4 + x + 1
    case 5: return 0b00101;        // x^5 + x^2 + 1
    case 6: return 0b000011;       // x^6 + x + 1
    case 7: return 0b0000011;      // x^7 + x + 1
    case 8: return 0b00011101;     // x^8 + x^4 + x^3 + x^2 + 1
    default: throw PhysicsError("no primitive polynomial tabulated for n = " + std::to_string(n));
  }
}

/// GF(2) matrix, rows[r] bit c = entry (r, c). Acts on qubit-value vectors.
using BinaryMatrix = std::vector<unsigned>;

/// Multiplication by x in GF(2)[x]/p(x), with qubit q holding the x^q coefficient.
/// Its powers 0..2^n - 2 permute the nonzero basis states in one cycle.
inline BinaryMatrix singer_cycle(int n) {
  const unsigned low = primitive_polynomial_low_terms(n);
  BinaryMatrix m(static_cast<std::size_t>(n), 0U);
  // column c is the image of basis vector x^c
  for (int c = 0; c < n; ++c) {
    unsigned image = c + 1 < n ? (1U << (c + 1)) : low;
    for (int r = 0; r < n; ++r)
      if (image & (1U << r)) m[r] |= 1U << c;
  }
  return m;
}

inline BinaryMatrix binary_multiply(const BinaryMatrix& a, const BinaryMatrix& b) {
  const int n = static_cast<int>(a.size());
  BinaryMatrix out(static_cast<std::size_t>(n), 0U);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k)
      if (a[r] & (1U << k)) out[r] ^= b[k];
  return out;
}

inline BinaryMatrix binary_identity(int n) {
  BinaryMatrix m(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) m[r] = 1U << r;
  return m;
}

/// CNOT circuit whose action on qubit values is v -> M v (M invertible).
inline Circuit linear_reversible_circuit(const BinaryMatrix& matrix) {
  const int n = static_cast<int>(matrix.size());
  BinaryMatrix m = matrix;
  std::vector<std::pair<int, int>> ops;  // (control, target): row_target ^= row_control
  for (int c = 0; c < n; ++c) {
    if (!(m[c] & (1U << c))) {
      int r = c + 1;
      while (r < n && !(m[r] & (1U << c))) ++r;
      if (r == n) throw PhysicsError("linear map is singular");
      m[c] ^= m[r];
      ops.emplace_back(r, c);
    }
    for (int r = 0; r < n; ++r) {
      if (r != c && (m[r] & (1U << c))) {
        m[r] ^= m[c];
        ops.emplace_back(c, r);
      }
    }
  }
  // E_m ... E_1 M = 1, so M = E_1 ... E_m: apply the recorded operations in reverse.
  Circuit circuit(n);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) circuit.add(Gate::cnot(it->first, it->second));
  return circuit;
}

struct TemporalAveragingOptions {
  int max_spins = 4;
  bool parallel = true;
  CompilerOptions compiler;
};

/// Circuits of the N-1 averaging experiments: powers of the Singer cycle.
inline std::vector<Circuit> temporal_averaging_circuits(int n) {
  std::vector<Circuit> out;
  if (n == 1) {
    out.emplace_back(1);
    return out;
  }
  const BinaryMatrix step = singer_cycle(n);
  BinaryMatrix power = binary_identity(n);
  const std::size_t experiments = (std::size_t{1} << n) - 1;
  for (std::size_t k = 0; k < experiments; ++k) {
    out.push_back(linear_reversible_circuit(power));
    power = binary_multiply(step, power);
  }
  return out;
}

/// Averages N-1 experiments, each applying a compiled permutation of the
/// non-ground basis states to `input`. Exactly pseudo-pure for diagonal input.
inline DensityMatrix prepare_pseudopure_temporal(const SpinSystem& system, const DensityMatrix& input,
                                                 const TemporalAveragingOptions& options = {}) {
  const int n = system.size();
  if (n > options.max_spins) {
    throw PhysicsError("temporal averaging capped at " + std::to_string(options.max_spins) + " spins (" +
                       std::to_string((std::size_t{1} << n) - 1) + " experiments requested)");
  }
  const auto circuits = temporal_averaging_circuits(n);
  std::vector<Compilation> compiled;
  for (const auto& c : circuits) compiled.push_back(compile_circuit(c, system, options.compiler));

  const auto run = [&](std::size_t k) { return simulate_sequence(compiled[k].sequence, input, system).final_state.matrix(); };
  std::vector<Matrix> results(compiled.size());
  if (options.parallel && compiled.size() > 1) {
    std::vector<std::future<Matrix>> jobs;
    for (std::size_t k = 0; k < compiled.size(); ++k) jobs.push_back(std::async(std::launch::async, run, k));
    for (std::size_t k = 0; k < jobs.size(); ++k) results[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < compiled.size(); ++k) results[k] = run(k);
  }

  // Fixed-order compensated summation: independent of thread scheduling.
  const Eigen::Index dim = input.dim();
  Matrix sum = Matrix::Zero(dim, dim);
  Matrix carry = Matrix::Zero(dim, dim);
  for (const auto& r : results) {
    const Matrix y = r - carry;
    const Matrix t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  sum /= static_cast<double>(results.size());
  return {std::move(sum), DensityMatrix::Unchecked{}};
}

inline DensityMatrix prepare_pseudopure_temporal(const SpinSystem& system, const ThermalConditions& conditions,
                                                 const TemporalAveragingOptions& options = {}) {
  return prepare_pseudopure_temporal(system, thermal_state(system, conditions), options);
}

}  // namespace nmrqc
