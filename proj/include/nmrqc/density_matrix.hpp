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
 * @file density_matrix.hpp
 * @brief Ensemble state of an n-spin system and the spin-1/2 operator basis
 * embedded in the 2^n dimensional Hilbert space.
 */
#pragma once

#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "nmrqc/errors.hpp"
#include "nmrqc/spin_model.hpp"

namespace nmrqc {

using Matrix2 = Eigen::Matrix2cd;
using Vector = Eigen::VectorXcd;

enum class Axis { x, y, z };

/// Single-spin angular momentum operator I_axis = sigma_axis / 2.
inline Matrix2 spin_half(Axis axis) {
  Matrix2 m;
  const Complex i{0.0, 1.0};
  switch (axis) {
    case Axis::x: m << 0.0, 0.5, 0.5, 0.0; break;
    case Axis::y: m << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    case Axis::z: m << 0.5, 0.0, 0.0, -0.5; break;
  }
  return m;
}

/// Embeds a 2x2 operator acting on qubit q into the full space.
inline Matrix embed(const Matrix2& op, int q, int n) {
  const std::size_t dim = std::size_t{1} << n;
  const int shift = n - 1 - q;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t a = 0; a < dim; ++a) {
    const int ba = static_cast<int>((a >> shift) & 1U);
    for (int bb = 0; bb < 2; ++bb) {
      const std::size_t b = (a & ~(std::size_t{1} << shift)) | (static_cast<std::size_t>(bb) << shift);
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = op(ba, bb);
    }
  }
  return out;
}

/// I_axis acting on spin q of an n-spin system.
inline Matrix spin_operator(int n, int q, Axis axis) { return embed(spin_half(axis), q, n); }

/// I_+ = I_x + i I_y on spin q (maps m = -1/2 to m = +1/2).
inline Matrix raising_operator(int n, int q) {
  Matrix2 plus;
  plus << 0.0, 1.0, 0.0, 0.0;
  return embed(plus, q, n);
}

/// rho <- U rho U^dagger for a single-qubit U on qubit q, without forming the
/// full operator.
inline void conjugate_qubit(Matrix& rho, const Matrix2& u, int q, int n) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  // Left multiplication acts on row pairs.
  for (Eigen::Index a = 0; a < dim; ++a) {
    if (a & stride) continue;
    const Eigen::Index b = a | stride;
    for (Eigen::Index c = 0; c < dim; ++c) {
      const Complex r0 = rho(a, c);
      const Complex r1 = rho(b, c);
      rho(a, c) = u(0, 0) * r0 + u(0, 1) * r1;
      rho(b, c) = u(1, 0) * r0 + u(1, 1) * r1;
    }
  }
  const Matrix2 ud = u.adjoint();
  for (Eigen::Index c = 0; c < dim; ++c) {
    if (c & stride) continue;
    const Eigen::Index d = c | stride;
    for (Eigen::Index a = 0; a < dim; ++a) {
      const Complex r0 = rho(a, c);
      const Complex r1 = rho(a, d);
      rho(a, c) = r0 * ud(0, 0) + r1 * ud(1, 0);
      rho(a, d) = r0 * ud(0, 1) + r1 * ud(1, 1);
    }
  }
}

/// psi <- U psi for a single-qubit U on qubit q.
inline void apply_qubit(Vector& psi, const Matrix2& u, int q, int n) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  for (Eigen::Index a = 0; a < psi.size(); ++a) {
    if (a & stride) continue;
    const Eigen::Index b = a | stride;
    const Complex p0 = psi(a);
    const Complex p1 = psi(b);
    psi(a) = u(0, 0) * p0 + u(0, 1) * p1;
    psi(b) = u(1, 0) * p0 + u(1, 1) * p1;
  }
}

struct StateCheck {
  double hermiticity_error = 0.0;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool ok = true;
};

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = -1e-10;

/// Hermitian, unit-trace, positive semidefinite 2^n x 2^n matrix.
class DensityMatrix {
 public:
  struct Unchecked {};

  /// Validates the invariants; throws PhysicsError if any is violated.
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {
    init_size();
    const StateCheck c = check();
    if (!c.ok) {
      throw PhysicsError("not a density matrix: hermiticity error " + std::to_string(c.hermiticity_error) +
                         ", trace error " + std::to_string(c.trace_error) + ", min eigenvalue " +
                         std::to_string(c.min_eigenvalue));
    }
  }

  /// For results of operations already known to preserve the invariants.
  DensityMatrix(Matrix m, Unchecked) : m_(std::move(m)) { init_size(); }

  static DensityMatrix maximally_mixed(int n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    return {Matrix::Identity(dim, dim) / static_cast<double>(dim), Unchecked{}};
  }

  static DensityMatrix basis_state(int n, std::size_t index) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Matrix m = Matrix::Zero(dim, dim);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(m), Unchecked{}};
  }

  static DensityMatrix pure(const Vector& psi) {
    const double norm = psi.norm();
    if (norm == 0.0) throw PhysicsError("zero state vector");
    const Vector v = psi / norm;
    return {v * v.adjoint(), Unchecked{}};
  }

  const Matrix& matrix() const { return m_; }
  Matrix& mutable_matrix() { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  int num_spins() const { return n_; }

  Complex operator()(Eigen::Index a, Eigen::Index b) const { return m_(a, b); }

  StateCheck check() const {
    StateCheck c;
    c.hermiticity_error = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    c.trace_error = std::abs(m_.trace() - Complex{1.0, 0.0});
    const Matrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    c.min_eigenvalue = solver.eigenvalues().minCoeff();
    c.ok = c.hermiticity_error <= kHermitianTolerance && c.trace_error <= kTraceTolerance &&
           c.min_eigenvalue >= kPositivityTolerance;
    return c;
  }

 private:
  void init_size() {
    if (m_.rows() != m_.cols() || m_.rows() < 2 || !std::has_single_bit(static_cast<std::size_t>(m_.rows()))) {
      throw PhysicsError("density matrix must be square with power-of-two dimension >= 2");
    }
    n_ = std::countr_zero(static_cast<std::size_t>(m_.rows()));
  }

  Matrix m_;
  int n_ = 0;
};

/// Tr(rho sigma) for a pure target sigma = |psi><psi|; the state fidelity
/// used by the compiler checks.
inline double fidelity_with_pure(const DensityMatrix& rho, const Vector& psi) {
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real() / psi.squaredNorm();
}

}  // namespace nmrqc
