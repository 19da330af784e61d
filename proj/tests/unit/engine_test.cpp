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

#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"

namespace nmrqc {
namespace {

using testing::proton;
using testing::proton_system;

constexpr double kPi = constants::pi;

DensityMatrix one_spin(double ex, double ey, double ez) {
  // rho = E/2 + ex Ix + ey Iy + ez Iz
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  m += ex * spin_half(Axis::x) + ey * spin_half(Axis::y) + ez * spin_half(Axis::z);
  return {m, DensityMatrix::Unchecked{}};
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

DensityMatrix random_mixed(std::mt19937_64& rng, int n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

TEST(DensityMatrix, ValidatesInvariants) {
  Matrix m = Matrix::Identity(2, 2) / 2.0;
  EXPECT_NO_THROW(DensityMatrix{m});
  Matrix bad_trace = Matrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix{bad_trace}, PhysicsError);
  Matrix non_herm = m;
  non_herm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{non_herm}, PhysicsError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{negative}, PhysicsError);
  EXPECT_THROW(DensityMatrix(Matrix::Identity(3, 3) / 3.0), PhysicsError);
}

TEST(DensityMatrix, Factories) {
  const auto mixed = DensityMatrix::maximally_mixed(3);
  EXPECT_EQ(mixed.num_spins(), 3);
  EXPECT_TRUE(mixed.check().ok);
  const auto basis = DensityMatrix::basis_state(2, 3);
  EXPECT_EQ(basis(3, 3), Complex(1.0, 0.0));
  Vector psi(2);
  psi << 1.0, Complex(0.0, 1.0);
  const auto pure = DensityMatrix::pure(psi);
  EXPECT_TRUE(pure.check().ok);
  EXPECT_NEAR(fidelity_with_pure(pure, psi), 1.0, 1e-15);
}

TEST(Evolve, SemigroupProperty) {
  std::mt19937_64 rng(1);
  const Matrix h = random_hermitian(rng, 8) * 100.0;
  const auto rho = random_mixed(rng, 3);
  const auto split = evolve(evolve(rho, h, 0.013), h, 0.021);
  const auto whole = evolve(rho, h, 0.034);
  EXPECT_LT((split.matrix() - whole.matrix()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolve, MatchesMatrixExponential) {
  std::mt19937_64 rng(2);
  const Matrix h = random_hermitian(rng, 4) * 30.0;
  const auto rho = random_mixed(rng, 2);
  const double t = 0.05;
  const Matrix u = (Complex(0.0, -t) * h).exp();
  const Matrix expected = u * rho.matrix() * u.adjoint();
  EXPECT_LT((evolve(rho, h, t).matrix() - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Evolve, DiagonalFastPathAgreesWithGeneralPath) {
  std::mt19937_64 rng(3);
  const auto sys = proton_system(3, {{0, 1, 7.0}, {1, 2, 11.0}});
  const auto rho = random_mixed(rng, 3);
  const Matrix h = build_hamiltonian(sys);
  const Matrix u = (Complex(0.0, -0.02) * h).exp();
  const Matrix expected = u * rho.matrix() * u.adjoint();
  EXPECT_LT((evolve_diagonal(rho, hamiltonian_diagonal(sys), 0.02).matrix() - expected).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_THROW(evolve(rho, h, -1.0), PhysicsError);
  EXPECT_THROW(evolve(DensityMatrix::maximally_mixed(2), h, 1.0), PhysicsError);
}

TEST(Evolve, PreservesTraceAndPurity) {
  std::mt19937_64 rng(4);
  const auto sys = proton_system(2, {{0, 1, 7.0}});
  const Vector psi = testing::random_state(rng, 2);
  const auto out = evolve_diagonal(DensityMatrix::pure(psi), hamiltonian_diagonal(sys), 0.3);
  EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_NEAR((out.matrix() * out.matrix()).trace().real(), 1.0, 1e-12);
}

TEST(Pulses, NinetyXTakesIzToMinusIy) {
  const auto out = apply_hard_pulse(one_spin(0, 0, 1), {0}, kPi / 2.0, 0.0);
  const auto po = po_decompose(out);
  EXPECT_NEAR(po.coefficient("Iy0"), -1.0, 1e-14);
  EXPECT_NEAR(po.coefficient("Iz0"), 0.0, 1e-14);
  EXPECT_NEAR(po.coefficient("Ix0"), 0.0, 1e-14);
}

TEST(Pulses, NinetyYTakesIzToIx) {
  const auto out = apply_hard_pulse(one_spin(0, 0, 1), {0}, kPi / 2.0, kPi / 2.0);
  EXPECT_NEAR(po_decompose(out).coefficient("Ix0"), 1.0, 1e-14);
}

TEST(Pulses, PiPulseInvertsPopulations) {
  const auto out = apply_hard_pulse(DensityMatrix::basis_state(1, 0), {0}, kPi, 0.3);
  EXPECT_NEAR(out(1, 1).real(), 1.0, 1e-14);
}

TEST(Pulses, PhaseShiftEqualsZConjugation) {
  // R(theta, phi) = Rz(phi) Rx(theta) Rz(-phi).
  for (double phi : {0.0, 0.4, kPi / 2.0, 2.5}) {
    const Matrix2 direct = rotation(1.1, phi);
    const Matrix2 composed = z_rotation(phi) * rotation(1.1, 0.0) * z_rotation(-phi);
    EXPECT_LT((direct - composed).cwiseAbs().maxCoeff(), 1e-14) << phi;
  }
}

TEST(Pulses, RotationMatchesExponential) {
  const Matrix2 gen = spin_half(Axis::x) * std::cos(0.7) + spin_half(Axis::y) * std::sin(0.7);
  const Matrix2 expected = (Complex(0.0, -1.3) * gen).exp();
  EXPECT_LT((rotation(1.3, 0.7) - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((z_rotation(0.9) - (Complex(0.0, -0.9) * spin_half(Axis::z)).exp()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Pulses, ZRotationTurnsIxTowardIy) {
  const auto out = rotate_z(one_spin(1, 0, 0), 0, 0.3);
  const auto po = po_decompose(out);
  EXPECT_NEAR(po.coefficient("Ix0"), std::cos(0.3), 1e-14);
  EXPECT_NEAR(po.coefficient("Iy0"), std::sin(0.3), 1e-14);
}

TEST(Pulses, EmbeddedConjugationMatchesKronecker) {
  std::mt19937_64 rng(5);
  const auto rho = random_mixed(rng, 3);
  const Matrix2 r = rotation(0.8, 1.9);
  for (int q = 0; q < 3; ++q) {
    Matrix fast = rho.matrix();
    conjugate_qubit(fast, r, q, 3);
    const Matrix u = embed(r, q, 3);
    EXPECT_LT((fast - u * rho.matrix() * u.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Crush, ModesAndIdempotence) {
  std::mt19937_64 rng(6);
  const auto rho = random_mixed(rng, 2);
  for (auto mode : {CrushMode::physical, CrushMode::ideal}) {
    const auto once = gradient_crush(rho, mode);
    const auto twice = gradient_crush(once, mode);
    EXPECT_EQ(once.matrix(), twice.matrix());
    EXPECT_NEAR(once.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_TRUE(once.check().ok);
  }
  const auto phys = gradient_crush(rho, CrushMode::physical);
  EXPECT_EQ(phys(1, 2), rho(1, 2));  // |01><10| is zero-quantum
  EXPECT_EQ(phys(0, 1), Complex(0.0, 0.0));
  EXPECT_EQ(phys(0, 3), Complex(0.0, 0.0));
  const auto ideal = gradient_crush(rho, CrushMode::ideal);
  EXPECT_EQ(ideal(1, 2), Complex(0.0, 0.0));
}

TEST(Relax, ClosedFormSingleSpin) {
  RelaxationParams p{{2.0}, {0.5}, {0.2}};
  const auto rho = one_spin(0.3, 0.1, -0.4);
  const double t = 0.35;
  const auto out = po_decompose(relax(rho, p, t));
  EXPECT_NEAR(out.coefficient("Ix0"), 0.3 * std::exp(-t / 0.5), 1e-14);
  EXPECT_NEAR(out.coefficient("Iy0"), 0.1 * std::exp(-t / 0.5), 1e-14);
  // For one spin <sigma_z> equals the Iz coefficient; it relaxes toward 0.2.
  const double z = 0.2 + (-0.4 - 0.2) * std::exp(-t / 2.0);
  EXPECT_NEAR(out.coefficient("Iz0"), z, 1e-14);
}

TEST(Relax, SemigroupTracePositivity) {
  std::mt19937_64 rng(7);
  const auto rho = random_mixed(rng, 3);
  RelaxationParams p{{1.0, 3.0, kNoRelaxation}, {0.5, 6.0, 0.2}, {0.01, -0.02, 0.0}};
  const auto split = relax(relax(rho, p, 0.1), p, 0.25);
  const auto whole = relax(rho, p, 0.35);
  EXPECT_LT((split.matrix() - whole.matrix()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(whole.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_TRUE(DensityMatrix(whole.matrix()).check().ok);
}

TEST(Relax, CommutesWithFreeEvolutionWhenPopulationsFrozenOrUncoupled) {
  std::mt19937_64 rng(8);
  const auto rho = random_mixed(rng, 2);
  const auto commutator = [&](const SpinSystem& sys, const RelaxationParams& p) {
    const auto e = hamiltonian_diagonal(sys);
    const auto a = relax(evolve_diagonal(rho, e, 0.01), p, 0.01);
    const auto b = evolve_diagonal(relax(rho, p, 0.01), e, 0.01);
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
  };
  const auto coupled = proton_system(2, {{0, 1, 7.0}});
  const auto uncoupled = proton_system(2, {});
  RelaxationParams t2_only{{kNoRelaxation, kNoRelaxation}, {0.5, 1.0}, {0.1, 0.1}};
  RelaxationParams full{{1.0, 2.0}, {0.5, 1.0}, {0.1, 0.1}};
  EXPECT_LT(commutator(coupled, t2_only), 1e-14);
  EXPECT_LT(commutator(uncoupled, full), 1e-14);
  // T1 exchange on one spin mixes the J-split lines of its partner.
  EXPECT_GT(commutator(coupled, full), 1e-6);
}

TEST(Relax, NoRelaxationIsIdentityAndBadParamsThrow) {
  std::mt19937_64 rng(9);
  const auto rho = random_mixed(rng, 2);
  EXPECT_EQ(relax(rho, RelaxationParams::none(2), 5.0).matrix(), rho.matrix());
  RelaxationParams bad{{1.0, 1.0}, {3.0, 1.0}, {0.0, 0.0}};
  EXPECT_THROW(relax(rho, bad, 1.0), PhysicsError);
  EXPECT_THROW(relax(rho, RelaxationParams::none(3), 1.0), PhysicsError);
  EXPECT_THROW(relax(rho, RelaxationParams::none(2), -1.0), PhysicsError);
}

TEST(Relax, ThermalEquilibriumIsFixedPoint) {
  const SpinSystem sys({proton(0, 1.0, 0.5)}, CouplingTable(), 11.74);
  const auto p = RelaxationParams::thermal(sys, 300.0);
  const double pol = p.equilibrium_polarization[0];
  EXPECT_GT(pol, 0.0);
  const auto eq = one_spin(0, 0, pol);
  EXPECT_LT((relax(eq, p, 3.0).matrix() - eq.matrix()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(SoftPulse, RotatesThenRelaxes) {
  RelaxationParams p{{1.0}, {0.5}, {0.0}};
  const auto out = apply_soft_pulse(one_spin(0, 0, 1), 0, kPi / 2.0, 0.0, 0.01, p);
  EXPECT_NEAR(po_decompose(out).coefficient("Iy0"), -std::exp(-0.01 / 0.5), 1e-14);
  EXPECT_THROW(apply_soft_pulse(one_spin(0, 0, 1), 0, 1.0, 0.0, 0.0, p), PhysicsError);
}

TEST(Expectation, LadderAndZ) {
  const auto rho = one_spin(0.3, 0.2, 0.1);
  // Tr(rho I+) = Tr(rho (Ix + i Iy)) = (cx + i cy) / 2.
  const Complex v = expectation(rho, raising_operator(1, 0));
  EXPECT_NEAR(v.real(), 0.15, 1e-15);
  EXPECT_NEAR(v.imag(), 0.10, 1e-15);
  EXPECT_NEAR(z_expectation(rho, 0), 0.05, 1e-15);
  EXPECT_NEAR(z_expectation(DensityMatrix::basis_state(2, 1), 1), -0.5, 1e-15);
}

TEST(ProductOperators, LabelsAndCount) {
  const auto po = po_decompose(DensityMatrix::maximally_mixed(2));
  EXPECT_EQ(po.terms().size(), 16u);
  EXPECT_NEAR(po.coefficient("E"), 0.25, 1e-15);
  EXPECT_EQ(po.nonzero().size(), 1u);
  EXPECT_EQ(product_operator_label({1, 3}), "2Ix0Iz1");
  EXPECT_EQ(product_operator_label({3, 0, 2}), "2Iz0Iy2");
  EXPECT_EQ(product_operator_label({3, 3, 3}), "4Iz0Iz1Iz2");
}

TEST(ProductOperators, CoefficientsMatchTraceFormula) {
  std::mt19937_64 rng(10);
  const auto rho = random_mixed(rng, 3);
  const auto po = po_decompose(rho);
  for (const auto& t : po.terms()) {
    const Matrix b = product_operator_matrix(t.code);
    const double expected = (b * rho.matrix()).trace().real() / (b * b).trace().real();
    ASSERT_NEAR(t.coefficient, expected, 1e-13) << t.label;
  }
  EXPECT_LT((po.reconstruct() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ProductOperators, TwoSpinAntiphaseTerm) {
  // rho = E/4 + 0.1 * 2 Ix0 Iz1
  const Matrix b = product_operator_matrix({1, 3});
  const DensityMatrix rho(Matrix(Matrix::Identity(4, 4) / 4.0 + 0.1 * b), DensityMatrix::Unchecked{});
  const auto po = po_decompose(rho);
  EXPECT_NEAR(po.coefficient("2Ix0Iz1"), 0.1, 1e-15);
  EXPECT_EQ(po.nonzero().size(), 2u);
}

}  // namespace
}  // namespace nmrqc
