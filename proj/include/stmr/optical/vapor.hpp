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

#include <cmath>

#include "stmr/constants.hpp"
#include "stmr/errors.hpp"

namespace stmr {

// Total rubidium number density (m^-3) from the standard vapor-pressure
// model (log10 P[torr] = 2.881 + 4.857 - 4215/T solid, 2.881 + 4.312 - 4040/T
// liquid, melting point 312.46 K).
inline double rb_number_density(double temperature) {
  if (!(temperature > 0.0)) {
    throw InvalidParameterError("rb_number_density: temperature must be > 0");
  }
  const double log10_p_torr =
      temperature < 312.46 ? 2.881 + 4.857 - 4215.0 / temperature
                           : 2.881 + 4.312 - 4040.0 / temperature;
  const double p_pa = std::pow(10.0, log10_p_torr) * 133.322368;
  return p_pa / (constants::k_boltzmann * temperature);
}

// Vapor cell parameters; density_n0 is the density of the probed isotope.
struct VaporCellParams {
  double density_n0;
  double length;
  double temperature;
  double isotope_fraction;

  static VaporCellParams room_temperature_rb85() {
    VaporCellParams cell;
    cell.temperature = 295.0;
    cell.length = 0.075;
    cell.isotope_fraction = constants::rb85_abundance;
    cell.density_n0 =
        rb_number_density(cell.temperature) * cell.isotope_fraction;
    return cell;
  }

  void validate() const {
    if (!(density_n0 > 0.0) || !(length > 0.0) || !(temperature > 0.0)) {
      throw InvalidParameterError(
          "VaporCellParams: density, length, temperature must be > 0");
    }
    if (!(isotope_fraction > 0.0) || !(isotope_fraction <= 1.0)) {
      throw InvalidParameterError(
          "VaporCellParams: isotope_fraction must be in (0, 1]");
    }
  }
};

// Peak on-axis field (V/m) of a Gaussian beam of the given power and 1/e^2
// intensity radius, via I_peak = 2P / (pi w^2).
inline double gaussian_peak_field(double power, double waist) {
  if (!(power >= 0.0) || !(waist > 0.0)) {
    throw InvalidParameterError(
        "gaussian_peak_field: power must be >= 0 and waist > 0");
  }
  const double intensity = 2.0 * power / (constants::pi * waist * waist);
  return std::sqrt(2.0 * intensity /
                   (constants::speed_of_light * constants::epsilon0));
}

}  // namespace stmr
