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
 * @file engine.hpp
 * @brief State-to-state maps: free evolution, RF pulses, gradient crushers,
 * T1/T2 relaxation and expectation values.
 *
 * Pulse convention: a pulse of angle theta and phase phi applies
 * R = exp(-i theta (I_x cos phi + I_y sin phi)) as rho -> R rho R^dagger, so a
 * (pi/2)_x pulse takes I_z to -I_y. All functions are pure.
 */
#pragma once

#include <bit>
#include <cmath>
#include <span>
#include <vector>

#include "nmrqc/constants.hpp"
#include "nmrqc/density_matrix.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

namespace detail {

inline void require_same_dim(const DensityMatrix& rho, Eigen::Index dim, const char* what) {
  if (rho.dim() != dim) {
    throw PhysicsError(std::string(what) + ": dimension mismatch (" + std::to_string(rho.dim()) + " vs " +
                       std::to_string(dim) + ")");
  }
}

inline bool is_diagonal(const Matrix& h) {
  for (Eigen::Index c = 0; c < h.cols(); ++c)
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      if (r != c && h(r, c) != Complex{0.0, 0.0}) return false;
  return true;
}

}  // namespace detail

/// rho -> U rho U^dagger with U = exp(-i H t), H diagonal (given as its diagonal, rad/s).
inline DensityMatrix evolve_diagonal(const DensityMatrix& rho, const RealVector& energies, double t) {
  detail::require_same_dim(rho, energies.size(), "evolve");
  if (t < 0.0) throw PhysicsError("evolve: negative time");
  Matrix out = rho.matrix();
  const Eigen::Index dim = out.rows();
  Vector phase(dim);
  for (Eigen::Index a = 0; a < dim; ++a) phase(a) = std::polar(1.0, -energies(a) * t);
  for (Eigen::Index b = 0; b < dim; ++b)
    for (Eigen::Index a = 0; a < dim; ++a) out(a, b) *= phase(a) * std::conj(phase(b));
  return {std::move(out), DensityMatrix::Unchecked{}};
}

/// rho -> U rho U^dagger, U = exp(-i H t), for any Hermitian H (rad/s).
inline DensityMatrix evolve(const DensityMatrix& rho, const Matrix& hamiltonian, double t) {
  if (hamiltonian.rows() != hamiltonian.cols()) throw PhysicsError("evolve: Hamiltonian not square");
  detail::require_same_dim(rho, hamiltonian.rows(), "evolve");
  if (t < 0.0) throw PhysicsError("evolve: negative time");
  if (detail::is_diagonal(hamiltonian)) return evolve_diagonal(rho, hamiltonian.diagonal().real(), t);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
  const Matrix& v = solver.eigenvectors();
  const RealVector& w = solver.eigenvalues();
  Vector phases(w.size());
  for (Eigen::Index a = 0; a < w.size(); ++a) phases(a) = std::polar(1.0, -w(a) * t);
  const Matrix u = v * phases.asDiagonal() * v.adjoint();
  return {u * rho.matrix() * u.adjoint(), DensityMatrix::Unchecked{}};
}

/// exp(-i theta (I_x cos phi + I_y sin phi)) as a 2x2 matrix.
inline Matrix2 rotation(double angle, double phase) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const Complex i{0.0, 1.0};
  Matrix2 r;
  r << c, -i * s * std::polar(1.0, -phase), -i * s * std::polar(1.0, phase), c;
  return r;
}

/// exp(-i theta I_z) as a 2x2 matrix.
inline Matrix2 z_rotation(double angle) {
  Matrix2 r = Matrix2::Zero();
  r(0, 0) = std::polar(1.0, -angle / 2.0);
  r(1, 1) = std::polar(1.0, angle / 2.0);
  return r;
}

/// Instantaneous non-selective rotation of every spin in `targets`.
inline DensityMatrix apply_hard_pulse(const DensityMatrix& rho, std::span<const int> targets, double angle,
                                      double phase) {
  if (targets.empty()) throw PhysicsError("hard pulse needs at least one target");
  const int n = rho.num_spins();
  const Matrix2 r = rotation(angle, phase);
  Matrix out = rho.matrix();
  for (int q : targets) {
    if (q < 0 || q >= n) throw PhysicsError("pulse target out of range");
    conjugate_qubit(out, r, q, n);
  }
  return {std::move(out), DensityMatrix::Unchecked{}};
}

inline DensityMatrix apply_hard_pulse(const DensityMatrix& rho, std::initializer_list<int> targets, double angle,
                                      double phase) {
  return apply_hard_pulse(rho, std::span<const int>(targets.begin(), targets.size()), angle, phase);
}

/// exp(-i theta I_z) on one spin.
inline DensityMatrix rotate_z(const DensityMatrix& rho, int target, double angle) {
  const int n = rho.num_spins();
  if (target < 0 || target >= n) throw PhysicsError("z rotation target out of range");
  Matrix out = rho.matrix();
  conjugate_qubit(out, z_rotation(angle), target, n);
  return {std::move(out), DensityMatrix::Unchecked{}};
}

enum class CrushMode { physical, ideal };

/// Idealized B0 gradient: physical mode removes every element of nonzero
/// coherence order; ideal mode removes all off-diagonal elements.
inline DensityMatrix gradient_crush(const DensityMatrix& rho, CrushMode mode) {
  Matrix out = rho.matrix();
  const Eigen::Index dim = out.rows();
  for (Eigen::Index b = 0; b < dim; ++b) {
    for (Eigen::Index a = 0; a < dim; ++a) {
      if (a == b) continue;
      const bool zero_quantum = std::popcount(static_cast<std::size_t>(a)) == std::popcount(static_cast<std::size_t>(b));
      if (mode == CrushMode::ideal || !zero_quantum) out(a, b) = 0.0;
    }
  }
  return {std::move(out), DensityMatrix::Unchecked{}};
}

/// Per-spin T1/T2 and the equilibrium polarization <sigma_z> each spin relaxes toward.
struct RelaxationParams {
  std::vector<double> t1_s;
  std::vector<double> t2_s;
  std::vector<double> equilibrium_polarization;

  /// Relaxation toward thermal equilibrium at `temperature_k` (infinite temperature allowed).
  static RelaxationParams thermal(const SpinSystem& system, double temperature_k) {
    RelaxationParams p;
    for (const auto& s : system.spins()) {
      p.t1_s.push_back(s.t1_s);
      p.t2_s.push_back(s.t2_s);
      const double nu = larmor_frequency(s.nucleus.gamma, system.field_tesla());
      const double x = constants::planck * nu / (constants::boltzmann * temperature_k);
      p.equilibrium_polarization.push_back(std::tanh(x / 2.0));
    }
    return p;
  }

  static RelaxationParams none(int n) {
    return {std::vector<double>(static_cast<std::size_t>(n), kNoRelaxation),
            std::vector<double>(static_cast<std::size_t>(n), kNoRelaxation),
            std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  }

  int size() const { return static_cast<int>(t1_s.size()); }
};

/// Independent single-spin channels, exact for elapsed time t: coherences of
/// spin i decay as exp(-t/T2); its populations relax toward equilibrium as
/// exp(-t/T1). Requires T2 <= 2 T1 for complete positivity.
inline DensityMatrix relax(const DensityMatrix& rho, const RelaxationParams& params, double t) {
  if (t < 0.0) throw PhysicsError("relax: negative time");
  const int n = rho.num_spins();
  if (params.size() != n) throw PhysicsError("relax: parameter count does not match spin count");
  Matrix out = rho.matrix();
  if (t == 0.0) return {std::move(out), DensityMatrix::Unchecked{}};
  const Eigen::Index dim = out.rows();
  for (int q = 0; q < n; ++q) {
    const double t1 = params.t1_s[q];
    const double t2 = params.t2_s[q];
    if (t2 > 2.0 * t1) throw PhysicsError("relax: T2 may not exceed 2*T1");
    const double keep_pop = std::isfinite(t1) ? std::exp(-t / t1) : 1.0;
    const double keep_coh = std::isfinite(t2) ? std::exp(-t / t2) : 1.0;
    if (keep_pop == 1.0 && keep_coh == 1.0) continue;
    const double up = 0.5 * (1.0 + params.equilibrium_polarization[q]);
    const double down = 0.5 * (1.0 - params.equilibrium_polarization[q]);
    const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index b = 0; b < dim; ++b) {
      for (Eigen::Index a = 0; a < dim; ++a) {
        if (((a & stride) != 0) != ((b & stride) != 0)) out(a, b) *= keep_coh;
      }
    }
    if (keep_pop == 1.0) continue;
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (b & stride) continue;
      for (Eigen::Index a = 0; a < dim; ++a) {
        if (a & stride) continue;
        const Complex r00 = out(a, b);
        const Complex r11 = out(a | stride, b | stride);
        const Complex sum = r00 + r11;
        out(a, b) = keep_pop * r00 + (1.0 - keep_pop) * up * sum;
        out(a | stride, b | stride) = keep_pop * r11 + (1.0 - keep_pop) * down * sum;
      }
    }
  }
  return {std::move(out), DensityMatrix::Unchecked{}};
}

/// Frequency-selective rotation of one spin, modeled as the ideal rotation
/// followed by relaxation over the pulse duration.
inline DensityMatrix apply_soft_pulse(const DensityMatrix& rho, int target, double angle, double phase,
                                      double duration_s, const RelaxationParams& params) {
  if (!(duration_s > 0.0)) throw PhysicsError("soft pulse duration must be positive");
  const int n = rho.num_spins();
  if (target < 0 || target >= n) throw PhysicsError("pulse target out of range");
  Matrix out = rho.matrix();
  conjugate_qubit(out, rotation(angle, phase), target, n);
  return relax(DensityMatrix(std::move(out), DensityMatrix::Unchecked{}), params, duration_s);
}

/// Tr(rho O); complex for non-Hermitian observables such as I_+.
inline Complex expectation(const DensityMatrix& rho, const Matrix& observable) {
  if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
    throw PhysicsError("expectation: dimension mismatch");
  }
  // Tr(rho O) = sum_ab rho_ab O_ba
  return rho.matrix().cwiseProduct(observable.transpose()).sum();
}

/// <I_z> of spin q, read off the diagonal.
inline double z_expectation(const DensityMatrix& rho, int q) {
  const int n = rho.num_spins();
  double acc = 0.0;
  for (Eigen::Index a = 0; a < rho.dim(); ++a) acc += magnetic_number(static_cast<std::size_t>(a), q, n) * rho(a, a).real();
  return acc;
}

}  // namespace nmrqc
