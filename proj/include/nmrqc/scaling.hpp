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
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/init.hpp"

namespace nmrqc {

/// Temperature at which the Zeeman splitting hbar gamma B equals kT.
inline double critical_temperature(double field_tesla, double gamma) {
  if (!(field_tesla > 0.0)) throw PhysicsError("critical_temperature needs a positive field");
  return constants::hbar * std::abs(gamma) * field_tesla / constants::boltzmann;
}

/// Field at which hbar gamma B equals kT.
inline double critical_field(double temperature_k, double gamma) {
  if (!(temperature_k > 0.0)) throw PhysicsError("critical_field needs a positive temperature");
  if (gamma == 0.0) throw PhysicsError("critical_field needs a nonzero gamma");
  return constants::boltzmann * temperature_k / (constants::hbar * std::abs(gamma));
}

/// h nu in electronvolts.
inline double zeeman_energy_ev(double nu_hz) {
  if (!(nu_hz > 0.0)) throw PhysicsError("zeeman_energy needs a positive frequency");
  return constants::planck * nu_hz / constants::electron_volt;
}

inline double thermal_energy_ev(double temperature_k) {
  return constants::boltzmann * temperature_k / constants::electron_volt;
}

struct ExcessPopulation {
  double fraction = 0.0;  // tanh(h nu / 2kT)
  double excess = 0.0;    // fraction * molecules
};

inline ExcessPopulation excess_population(double nu_hz, double temperature_k, double molecules) {
  if (!(nu_hz > 0.0) || !(temperature_k > 0.0)) throw PhysicsError("excess_population needs nu > 0 and T > 0");
  ExcessPopulation e;
  e.fraction = std::tanh(constants::planck * nu_hz / (2.0 * constants::boltzmann * temperature_k));
  e.excess = e.fraction * molecules;
  return e;
}

inline int qubit_limit(int per_species_capacity, const std::vector<std::string>& species) {
  if (per_species_capacity < 1) throw PhysicsError("capacity must be at least 1");
  return per_species_capacity * static_cast<int>(species.size());
}

struct DecoherenceBudget {
  long long gates = 0;
  /// T1 can be far longer than T2; budgets derived from it are meaningless.
  std::string caution = "budget uses T2; T1-based estimates overstate it";
};

inline DecoherenceBudget decoherence_budget(double t2_s, double gate_time_s) {
  if (!(gate_time_s > 0.0)) throw PhysicsError("gate time must be positive");
  if (!(t2_s >= 0.0)) throw PhysicsError("T2 must be non-negative");
  // Slack keeps exact ratios such as 1 s / 1 ms from flooring to 999.
  return {static_cast<long long>(std::floor(t2_s / gate_time_s * (1.0 + 1e-12)))};
}

struct EpsilonRow {
  int n = 0;
  double epsilon_exact = 0.0;
  double epsilon_hightemp = 0.0;
  double repetitions = 1.0;  // (eps_1 / eps_n)^2, a signal-to-noise model
};

inline constexpr const char* kRepetitionsModel = "model: repetitions scale as 1/eps^2 (signal-to-noise heuristic)";

inline std::vector<EpsilonRow> epsilon_scaling_table(int n_max, double nu_hz, double temperature_k) {
  if (n_max < 1) throw PhysicsError("n_max must be at least 1");
  std::vector<EpsilonRow> rows;
  double first = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto r = epsilon_report(n, nu_hz, temperature_k);
    if (n == 1) first = r.epsilon_exact;
    const double ratio = first / r.epsilon_exact;
    rows.push_back({n, r.epsilon_exact, r.epsilon_hightemp, ratio * ratio});
  }
  return rows;
}

struct ScalingInputs {
  double field_tesla = 11.74;
  double temperature_k = 300.0;
  double gamma = constants::gamma::h1;
  double molecules = 1e17;
  int table_max_n = 12;
  int per_species_capacity = 6;
  std::vector<std::string> species = {"H1", "C13", "N15", "F19", "P31"};
  double t2_s = 1.0;
  double gate_time_s = 1e-3;
};

struct ScalingReport {
  double larmor_hz = 0.0;
  double critical_temperature_k = 0.0;
  double critical_field_tesla = 0.0;
  double zeeman_energy_ev = 0.0;
  double thermal_energy_ev = 0.0;
  ExcessPopulation excess;
  std::vector<EpsilonRow> epsilon_table;
  int qubit_limit = 0;
  DecoherenceBudget budget;
};

inline ScalingReport scaling_report(const ScalingInputs& in) {
  ScalingReport r;
  r.larmor_hz = std::abs(larmor_frequency(in.gamma, in.field_tesla));
  r.critical_temperature_k = critical_temperature(in.field_tesla, in.gamma);
  r.critical_field_tesla = critical_field(in.temperature_k, in.gamma);
  r.zeeman_energy_ev = zeeman_energy_ev(r.larmor_hz);
  r.thermal_energy_ev = thermal_energy_ev(in.temperature_k);
  r.excess = excess_population(r.larmor_hz, in.temperature_k, in.molecules);
  r.epsilon_table = epsilon_scaling_table(in.table_max_n, r.larmor_hz, in.temperature_k);
  r.qubit_limit = qubit_limit(in.per_species_capacity, in.species);
  r.budget = decoherence_budget(in.t2_s, in.gate_time_s);
  return r;
}

}  // namespace nmrqc
