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
 * @file constants.hpp
 * @brief Physical constants (SI, CODATA 2018 exact values) and gyromagnetic
 * ratios. Every physics routine in the library reads from this table.
 */
#pragma once

#include <numbers>

namespace nmrqc::constants {

inline constexpr double pi = std::numbers::pi;

/// Planck constant, J s (exact).
inline constexpr double planck = 6.62607015e-34;
/// Reduced Planck constant, J s.
inline constexpr double hbar = planck / (2.0 * pi);
/// Boltzmann constant, J/K (exact).
inline constexpr double boltzmann = 1.380649e-23;
/// Elementary charge, C (exact); 1 eV in joules.
inline constexpr double electron_volt = 1.602176634e-19;

/// Gyromagnetic ratios, rad s^-1 T^-1.
namespace gamma {
inline constexpr double h1 = 2.6752218744e8;  // CODATA 2018
inline constexpr double c13 = 6.728284e7;
inline constexpr double n15 = -2.7126180e7;
inline constexpr double f19 = 2.518148e8;
inline constexpr double p31 = 1.0839e8;
}  // namespace gamma

}  // namespace nmrqc::constants
