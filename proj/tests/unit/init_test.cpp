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

#include <cmath>
#include <random>
#include <bit>
#include <set>

#include "test_support.hpp"

namespace nmrqc {
namespace {

using testing::nucleus;
using testing::proton_system;

// Boltzmann populations exp(-E/kT)/Z with E = -h nu m summed over spins.
std::vector<double> boltzmann_populations(const SpinSystem& sys, const ThermalConditions& c) {
  const int n = sys.size();
  std::vector<double> w(sys.dimension());
  double z = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) {
    double e = 0.0;
    for (int q = 0; q < n; ++q) {
      const double nu = larmor_frequency(sys.spin(q).nucleus.gamma, c.field_tesla);
      e -= constants::planck * nu * magnetic_number(a, q, n);
    }
    w[a] = std::exp(-e / (constants::boltzmann * c.temperature_k));
    z += w[a];
  }
  for (auto& x : w) x /= z;
  return w;
}

SpinSystem two_protons() {
  CouplingTable t(2);
  t.set(0, 1, 7.143);
  return SpinSystem({testing::proton(400), testing::proton(-400)}, t, 11.74);
}

SpinSystem proton_carbon(double j = 215.0) {
  CouplingTable t(2);
  t.set(0, 1, j);
  return SpinSystem({nucleus("H1"), nucleus("C13")}, t, 11.74);
}

TEST(Thermal, MatchesBoltzmannPopulations) {
  for (const ThermalConditions c : {ThermalConditions{}, ThermalConditions{4.0, 20.0}, ThermalConditions{0.01, 11.74}}) {
    const auto sys = SpinSystem({nucleus("H1"), nucleus("C13"), nucleus("N15")}, CouplingTable(3), c.field_tesla);
    const auto rho = thermal_state(sys, c);
    const auto ref = boltzmann_populations(sys, c);
    for (std::size_t a = 0; a < ref.size(); ++a)
      EXPECT_NEAR(rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a)).real(), ref[a], 1e-14 * (1 + ref[a]));
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
  }
}

TEST(Thermal, RejectsNonPhysicalConditions) {
  const auto sys = two_protons();
  EXPECT_THROW(thermal_state(sys, {0.0, 11.74}), PhysicsError);
  EXPECT_THROW(thermal_state(sys, {300.0, -1.0}), PhysicsError);
}

TEST(EpsilonReport, SingleSpinIsTanh) {
  for (double nu : {100e6, 500e6, 1e9})
    for (double t : {1.0, 77.0, 300.0}) {
      const double x = constants::planck * nu / (constants::boltzmann * t);
      EXPECT_NEAR(epsilon_report(1, nu, t).epsilon_exact, std::tanh(x / 2.0), 1e-15);
    }
}

TEST(EpsilonReport, ExactEqualsHomonuclearPopulationSpread) {
  const ThermalConditions c{300.0, 11.74};
  for (int n = 1; n <= 6; ++n) {
    std::vector<Spin> spins;
    for (int i = 0; i < n; ++i) spins.push_back(testing::proton(100.0 * i));
    const SpinSystem sys(std::move(spins), CouplingTable(n), c.field_tesla);
    const auto pop = boltzmann_populations(sys, c);
    const double spread = *std::max_element(pop.begin(), pop.end()) - *std::min_element(pop.begin(), pop.end());
    const double nu = larmor_frequency(sys.spin(0).nucleus.gamma, c.field_tesla);
    EXPECT_NEAR(epsilon_report(n, nu, c.temperature_k).epsilon_exact / spread, 1.0, 1e-9) << n;
    EXPECT_NEAR(epsilon_bound(sys, c).population_spread / spread, 1.0, 1e-9);
  }
}

TEST(EpsilonReport, HighTemperatureFormAndScaling) {
  const double nu = 500e6;
  for (int n = 1; n <= 20; ++n) {
    const auto r = epsilon_report(n, nu, 300.0);
    EXPECT_NEAR(r.epsilon_hightemp / r.epsilon_exact, 1.0, 1e-3) << n;
    if (n > 1) {
      const auto prev = epsilon_report(n - 1, nu, 300.0);
      EXPECT_NEAR(r.epsilon_hightemp / prev.epsilon_hightemp, n / (2.0 * (n - 1)), 1e-12);
    }
  }
  EXPECT_THROW(epsilon_report(0, nu, 300.0), PhysicsError);
  EXPECT_THROW(epsilon_report(2, nu, 0.0), PhysicsError);
}

TEST(EpsilonReport, LowTemperatureSaturates) {
  EXPECT_NEAR(epsilon_report(3, 500e6, 1e-4).epsilon_exact, 1.0, 1e-12);
}

TEST(EpsilonBound, PerSpeciesAndHeteronuclearFlag) {
  const auto b = epsilon_bound(proton_carbon(), {});
  EXPECT_TRUE(b.heteronuclear);
  EXPECT_EQ(b.per_species.size(), 2u);
  EXPECT_EQ(b.per_species.at("H1").n, 1);
  const auto pop = boltzmann_populations(proton_carbon(), {});
  EXPECT_NEAR(b.population_spread / (pop.front() - pop.back()), 1.0, 1e-9);
}

TEST(Readout, PCorrectLimits) {
  EXPECT_DOUBLE_EQ(p_correct(1.0, 8), 1.0);
  EXPECT_DOUBLE_EQ(p_correct(0.0, 8), 0.125);
  EXPECT_NEAR(p_correct(0.3, 4) + p_wrong(0.3, 4), 1.0, 1e-15);
  // Ground-state population of the pseudo-pure state is the success probability.
  const auto rho = polarization_override(3, 0.3);
  EXPECT_NEAR(rho(0, 0).real(), p_correct(0.3, 8), 1e-15);
  EXPECT_THROW(p_correct(1.5, 4), PhysicsError);
  EXPECT_THROW(p_correct(0.5, 1), PhysicsError);
}

TEST(PseudoPure, OverrideRoundTripsThroughExtraction) {
  for (double eps : {0.0, 1e-5, 0.25, 1.0}) EXPECT_NEAR(extract_epsilon(polarization_override(3, eps)), eps, 1e-15);
  EXPECT_THROW(polarization_override(2, -0.1), PhysicsError);
}

TEST(PseudoPure, StructureErrorCarriesDeviation) {
  const auto thermal = thermal_state(two_protons(), {});
  try {
    extract_epsilon(thermal);
    FAIL() << "thermal state accepted as pseudo-pure";
  } catch (const StructureError& e) {
    const auto pop = boltzmann_populations(two_protons(), {});
    EXPECT_NEAR(e.worst_deviation, pop[1] - pop[3], 1e-15);
  }
}

TEST(PseudoPure, EpsilonAlongRotatedState) {
  const auto rho = polarization_override(2, 0.2);
  const Matrix u = circuit_unitary(Circuit(2).add(Gate::ry(0, 1.0)).add(Gate::cnot(0, 1)));
  const DensityMatrix rotated(u * rho.matrix() * u.adjoint());
  EXPECT_NEAR(epsilon_along(rotated, u.col(0)), 0.2, 1e-14);
}

// --- spatial averaging ----------------------------------------------------------

TEST(Spatial, HomonuclearReachesPseudoPure) {
  const ThermalConditions c{};
  for (const auto crush : {CrushMode::physical, CrushMode::ideal}) {
    const auto rho = prepare_pseudopure_spatial(two_protons(), c, {}, crush);
    const double eps = extract_epsilon(rho);
    EXPECT_GT(eps, 0.0);
    EXPECT_LE(eps, epsilon_bound(two_protons(), c).population_spread * (1 + 1e-9));
  }
}

TEST(Spatial, HeteronuclearAndNegativeCoupling) {
  const ThermalConditions c{};
  for (double j : {215.0, -140.0}) {
    const auto sys = proton_carbon(j);
    const double eps = extract_epsilon(prepare_pseudopure_spatial(sys, c));
    const auto b = epsilon_bound(sys, c);
    EXPECT_GT(eps, 0.0);
    EXPECT_LE(eps, b.population_spread * (1 + 1e-9));
  }
  // Negative gyromagnetic ratio flips the sign of the weaker polarization.
  CouplingTable t(2);
  t.set(0, 1, -90.0);
  const SpinSystem hn({nucleus("H1"), nucleus("N15")}, t, 11.74);
  EXPECT_GT(extract_epsilon(prepare_pseudopure_spatial(hn, c)), 0.0);
}

TEST(Spatial, RejectsUnsupportedSystems) {
  EXPECT_THROW(spatial_preparation_sequence(proton_system(3, {{0, 1, 7.0}, {1, 2, 7.0}}), {}), PhysicsError);
  EXPECT_THROW(spatial_preparation_sequence(proton_system(2, {}), {}), PhysicsError);
}

// --- temporal averaging ------------------------------------------------------------

std::size_t basis_index(unsigned value, int n) {
  std::size_t a = 0;
  for (int q = 0; q < n; ++q)
    if (value & (1U << q)) a |= std::size_t{1} << (n - 1 - q);
  return a;
}

TEST(Temporal, CircuitsImplementTheirLinearMaps) {
  std::mt19937_64 rng(31);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      BinaryMatrix m = binary_identity(n);
      for (int k = 0; k < 3 * n; ++k) {  // random invertible: products of row additions
        const int r = static_cast<int>(rng() % n);
        const int s = static_cast<int>(rng() % n);
        if (r != s) m[r] ^= m[s];
      }
      const Matrix u = circuit_unitary(linear_reversible_circuit(m));
      for (unsigned v = 0; v < (1U << n); ++v) {
        unsigned image = 0;
        for (int r = 0; r < n; ++r) image |= static_cast<unsigned>(std::popcount(m[r] & v) & 1) << r;
        EXPECT_NEAR(std::abs(u(static_cast<Eigen::Index>(basis_index(image, n)), static_cast<Eigen::Index>(basis_index(v, n)))),
                    1.0, 1e-15);
      }
    }
  }
}

TEST(Temporal, SingerPowersVisitEveryNonzeroStateOnce) {
  for (int n = 2; n <= 8; ++n) {
    const BinaryMatrix step = singer_cycle(n);
    BinaryMatrix power = binary_identity(n);
    std::set<unsigned> seen;
    const std::size_t period = (std::size_t{1} << n) - 1;
    for (std::size_t k = 0; k < period; ++k) {
      unsigned image = 0;                   // image of v = 1 (x^0)
      for (int r = 0; r < n; ++r) image |= ((power[r] & 1U) ? 1U : 0U) << r;
      seen.insert(image);
      power = binary_multiply(step, power);
    }
    seen.erase(0U);
    EXPECT_EQ(seen.size(), period) << n;
    EXPECT_EQ(power, binary_identity(n)) << n;
  }
}

TEST(Temporal, ThermalInputGivesExpectedEpsilon) {
  const ThermalConditions c{};
  const auto sys = proton_system(3, {{0, 1, 7.0}, {1, 2, 9.0}});
  const auto pop = boltzmann_populations(sys, c);
  const double n = static_cast<double>(pop.size());
  const double expected = (n * pop[0] - 1.0) / (n - 1.0);
  const double eps = extract_epsilon(prepare_pseudopure_temporal(sys, c));
  EXPECT_NEAR(eps / expected, 1.0, 1e-9);
  EXPECT_LE(eps, epsilon_bound(sys, c).population_spread);
}

TEST(Temporal, RandomDiagonalInputsBecomePseudoPure) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    const auto sys = testing::random_system(rng, n, 0.5);
    Matrix d = Matrix::Zero(static_cast<Eigen::Index>(sys.dimension()), static_cast<Eigen::Index>(sys.dimension()));
    for (Eigen::Index a = 0; a < d.rows(); ++a) d(a, a) = u(rng);
    d /= d.trace();
    const double n_dim = static_cast<double>(d.rows());
    const double expected = n == 1 ? 2.0 * d(0, 0).real() - 1.0 : (n_dim * d(0, 0).real() - 1.0) / (n_dim - 1.0);
    const auto rho = prepare_pseudopure_temporal(sys, DensityMatrix(d));
    if (n == 1) {
      EXPECT_NEAR(check_pseudopure(rho).epsilon, expected, 1e-12);
    } else {
      EXPECT_NEAR(extract_epsilon(rho), expected, 1e-10) << n;
    }
  }
}

TEST(Temporal, CoherentInputIsNotPseudoPure) {
  const auto sys = proton_system(2, {{0, 1, 7.0}});
  Vector plus = Vector::Zero(4);
  plus(0) = plus(2) = 1.0 / std::sqrt(2.0);
  EXPECT_THROW(extract_epsilon(prepare_pseudopure_temporal(sys, DensityMatrix::pure(plus))), StructureError);
}

TEST(Temporal, ParallelAndSerialAreBitIdentical) {
  const auto sys = proton_system(3, {{0, 1, 7.0}, {1, 2, 9.0}, {0, 2, 3.0}});
  TemporalAveragingOptions serial;
  serial.parallel = false;
  const auto a = prepare_pseudopure_temporal(sys, ThermalConditions{});
  const auto b = prepare_pseudopure_temporal(sys, ThermalConditions{}, serial);
  EXPECT_TRUE(a.matrix() == b.matrix());
}

TEST(Temporal, SpinCapIsEnforced) {
  const auto five = proton_system(5, {{0, 1, 7.0}, {1, 2, 7.0}, {2, 3, 7.0}, {3, 4, 7.0}});
  EXPECT_THROW(prepare_pseudopure_temporal(five, ThermalConditions{}), PhysicsError);
  EXPECT_EQ(temporal_averaging_circuits(4).size(), 15u);
  EXPECT_EQ(temporal_averaging_circuits(1).size(), 1u);
}

}  // namespace
}  // namespace nmrqc
