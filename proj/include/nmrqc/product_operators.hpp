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
 * @file product_operators.hpp
 * @brief Expansion of a density matrix in the product-operator basis.
 *
 * Basis elements are E (the identity) and 2^(q-1) I_a^i I_b^k ... for a
 * product of q single-spin operators, labelled e.g. "Iz0", "2Ix0Iz1",
 * "4Iy0Iz1Iz2". The basis is orthogonal under Tr(A^dagger B), and
 * rho = sum_B c_B B with c_B = Tr(B rho) / Tr(B B).
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nmrqc/density_matrix.hpp"

namespace nmrqc {

/// Per-spin factor: 0 = E, 1 = I_x, 2 = I_y, 3 = I_z.
using ProductOperatorCode = std::vector<std::uint8_t>;

inline std::string product_operator_label(const ProductOperatorCode& code) {
  int q = 0;
  std::string body;
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i] == 0) continue;
    ++q;
    body += "I";
    body += "xyz"[code[i] - 1];
    body += std::to_string(i);
  }
  if (q == 0) return "E";
  if (q == 1) return body;
  return std::to_string(1u << (q - 1)) + body;
}

/// Basis element as a full matrix.
inline Matrix product_operator_matrix(const ProductOperatorCode& code) {
  const int n = static_cast<int>(code.size());
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  Matrix m = Matrix::Identity(dim, dim);
  int q = 0;
  for (int i = 0; i < n; ++i) {
    if (code[i] == 0) continue;
    ++q;
    m = m * spin_operator(n, i, static_cast<Axis>(code[i] - 1));
  }
  if (q > 1) m *= static_cast<double>(1u << (q - 1));
  return m;
}

struct ProductOperatorTerm {
  ProductOperatorCode code;
  std::string label;
  double coefficient = 0.0;
};

class ProductOperatorExpansion {
 public:
  ProductOperatorExpansion(int n, std::vector<ProductOperatorTerm> terms) : n_(n), terms_(std::move(terms)) {}

  int num_spins() const { return n_; }
  const std::vector<ProductOperatorTerm>& terms() const { return terms_; }

  /// Coefficient for a label such as "2Iz0Iz1"; zero if absent.
  double coefficient(const std::string& label) const {
    for (const auto& t : terms_)
      if (t.label == label) return t.coefficient;
    return 0.0;
  }

  /// Terms with |coefficient| > tol.
  std::vector<ProductOperatorTerm> nonzero(double tol = 1e-12) const {
    std::vector<ProductOperatorTerm> out;
    for (const auto& t : terms_)
      if (std::abs(t.coefficient) > tol) out.push_back(t);
    return out;
  }

  Matrix reconstruct() const {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_);
    Matrix m = Matrix::Zero(dim, dim);
    for (const auto& t : terms_)
      if (t.coefficient != 0.0) m += t.coefficient * product_operator_matrix(t.code);
    return m;
  }

 private:
  int n_;
  std::vector<ProductOperatorTerm> terms_;
};

namespace detail {

/// Tr(P rho) for P the Pauli string sigma_{code}, in O(N): every Pauli string
/// is a signed permutation.
inline Complex pauli_trace(const Matrix& rho, const ProductOperatorCode& code) {
  const int n = static_cast<int>(code.size());
  const Eigen::Index dim = rho.rows();
  Complex acc{0.0, 0.0};
  for (Eigen::Index b = 0; b < dim; ++b) {
    // P|b> = phase |a>
    Eigen::Index a = b;
    Complex phase{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const Eigen::Index bit = Eigen::Index{1} << (n - 1 - i);
      const bool one = (b & bit) != 0;
      switch (code[i]) {
        case 1: a ^= bit; break;
        case 2: a ^= bit; phase *= one ? Complex{0.0, -1.0} : Complex{0.0, 1.0}; break;
        case 3: if (one) phase = -phase; break;
        default: break;
      }
    }
    // Tr(P rho) = sum_b <b|P rho|b> = sum_b sum_a P_ba rho_ab; P_ab = phase for column b.
    acc += phase * rho(b, a);
  }
  return acc;
}

}  // namespace detail

/// Coefficients of rho in the product-operator basis, in lexicographic code order.
inline ProductOperatorExpansion po_decompose(const DensityMatrix& rho) {
  const int n = rho.num_spins();
  const double dim = static_cast<double>(rho.dim());
  std::vector<ProductOperatorTerm> terms;
  const std::size_t count = std::size_t{1} << (2 * n);
  terms.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    ProductOperatorCode code(static_cast<std::size_t>(n));
    int q = 0;
    for (int i = 0; i < n; ++i) {
      code[i] = static_cast<std::uint8_t>((idx >> (2 * (n - 1 - i))) & 3U);
      if (code[i] != 0) ++q;
    }
    const double tr_pauli = detail::pauli_trace(rho.matrix(), code).real();
    // B = P / 2 for q >= 1 (P the Pauli string), B = E for q = 0.
    // c = Tr(B rho) / Tr(B B) = (tr_pauli / 2) / (dim / 4) = 2 tr_pauli / dim.
    const double c = q == 0 ? tr_pauli / dim : 2.0 * tr_pauli / dim;
    terms.push_back({code, product_operator_label(code), c});
  }
  return {n, std::move(terms)};
}

}  // namespace nmrqc
