// Copyright 2026 The stmr Authors
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

namespace stmr::constants {

// CODATA 2018 exact / recommended values, SI units.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;      // m
inline constexpr double epsilon0 = 8.8541878128e-12;   // F/m
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// e*a0 in C m, the unit dipole moments are quoted in.
inline constexpr double ea0 = elementary_charge * bohr_radius;

// Rb-85 atomic mass (kg).
inline constexpr double rb85_mass = 84.911789738 * atomic_mass_unit;

// Rb-85 natural abundance.
inline constexpr double rb85_abundance = 0.7217;

}  // namespace stmr::constants
