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

#include <array>
#include <cmath>
#include <string>

#include "stmr/constants.hpp"
#include "stmr/errors.hpp"

namespace stmr {

// Transit dephasing rate (rad/s) of thermal atoms crossing a Gaussian beam
// of 1/e^2 intensity radius w: gamma_t = sqrt(8 kB T / (pi m)) / (w sqrt(2 ln 2)).
inline double transit_rate_from_geometry(double temperature, double mass,
                                         double waist) {
  if (!(temperature > 0.0) || !(mass > 0.0) || !(waist > 0.0)) {
    throw InvalidParameterError(
        "transit_rate_from_geometry: temperature, mass and waist must be > 0");
  }
  const double mean_speed_2d =
      std::sqrt(8.0 * constants::k_boltzmann * temperature /
                (constants::pi * mass));
  return mean_speed_2d / (waist * std::sqrt(2.0 * std::log(2.0)));
}

// Static parameters of the four-level ladder |1> -> |2> -> |3> -> |4> and the
// vapor/beam geometry they are probed with. Rates are angular (rad/s),
// dipoles in units of e*a0.
struct LadderConfig {
  double dipole_d21 = 1.93;
  double dipole_d32 = 0.0102;
  double dipole_d43 = 1372.2;

  double gamma_21 = constants::two_pi * 6.066e6;
  double gamma_32 = constants::two_pi * 500e3;
  double gamma_43 = constants::two_pi * 500e3;

  // Extra per-level pure dephasing for levels 2..4; zero by default.
  std::array<double, 3> dephasing_gamma{0.0, 0.0, 0.0};

  double transit_rate =
      transit_rate_from_geometry(295.0, constants::rb85_mass, 190e-6);

  double temperature = 295.0;
  double atom_mass = constants::rb85_mass;
  double beam_waist = 190e-6;
  double cell_length = 0.075;
  double lambda_probe = 780.241e-9;
  double lambda_coupling = 480e-9;

  // Dipole moments in C m.
  double d21_si() const { return dipole_d21 * constants::ea0; }
  double d32_si() const { return dipole_d32 * constants::ea0; }
  double d43_si() const { return dipole_d43 * constants::ea0; }

  void validate() const {
    auto positive = [](double x, const char* name) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw InvalidParameterError(std::string("LadderConfig: ") + name +
                                    " must be positive and finite");
      }
    };
    positive(dipole_d21, "dipole_d21");
    positive(dipole_d32, "dipole_d32");
    positive(dipole_d43, "dipole_d43");
    positive(gamma_21, "gamma_21");
    positive(gamma_32, "gamma_32");
    positive(gamma_43, "gamma_43");
    positive(temperature, "temperature");
    positive(atom_mass, "atom_mass");
    positive(beam_waist, "beam_waist");
    positive(cell_length, "cell_length");
    positive(lambda_probe, "lambda_probe");
    positive(lambda_coupling, "lambda_coupling");
    for (double g : dephasing_gamma) {
      if (!(g >= 0.0) || !std::isfinite(g)) {
        throw InvalidParameterError(
            "LadderConfig: dephasing_gamma entries must be >= 0 and finite");
      }
    }
    if (!(transit_rate >= 0.0) || !std::isfinite(transit_rate)) {
      throw InvalidParameterError(
          "LadderConfig: transit_rate must be >= 0 and finite");
    }
  }
};

// Laser/RF detunings (rad/s). Two- and three-photon detunings are always
// recomputed, never stored.
struct Detunings {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;

  double two_photon() const { return delta1 + delta2; }
  double three_photon() const { return delta1 + delta2 - delta3; }

  void validate() const {
    if (!std::isfinite(delta1) || !std::isfinite(delta2) ||
        !std::isfinite(delta3)) {
      throw InvalidParameterError("Detunings: all detunings must be finite");
    }
  }
};

}  // namespace stmr
