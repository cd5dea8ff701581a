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
#include <cstdint>
#include <vector>

#include "stmr/atomic/drives.hpp"
#include "stmr/constants.hpp"
#include "stmr/errors.hpp"

namespace stmr {

// Effective aperture used to relate incident RF power to the field at the
// atoms. Chosen so that the benchmark tone powers map onto the Rabi
// frequencies used throughout.
inline constexpr double kDefaultRfAperture = 3.075e-5;  // m^2

inline double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) {
    throw InvalidParameterError("watts_to_dbm: power must be > 0");
  }
  return 10.0 * std::log10(watts / 1e-3);
}

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

// Plane-wave intensity I = P/A, E = sqrt(2 I / (c eps0)).
inline double rf_power_to_efield(double watts, double area = kDefaultRfAperture) {
  if (!(watts >= 0.0) || !(area > 0.0)) {
    throw InvalidParameterError("rf_power_to_efield: bad power or area");
  }
  return std::sqrt(2.0 * watts /
                   (area * constants::speed_of_light * constants::epsilon0));
}

inline double rf_efield_to_power(double efield, double area = kDefaultRfAperture) {
  if (!(efield >= 0.0) || !(area > 0.0)) {
    throw InvalidParameterError("rf_efield_to_power: bad field or area");
  }
  return 0.5 * constants::speed_of_light * constants::epsilon0 * efield *
         efield * area;
}

inline double rabi_from_field(double efield, double dipole_si) {
  return dipole_si * efield / constants::hbar;
}

inline double field_from_rabi(double rabi, double dipole_si) {
  if (!(dipole_si > 0.0)) {
    throw InvalidParameterError("field_from_rabi: dipole must be > 0");
  }
  return rabi * constants::hbar / dipole_si;
}

inline double rf_rabi_from_dbm(double dbm, double dipole_si,
                               double area = kDefaultRfAperture) {
  return rabi_from_field(rf_power_to_efield(dbm_to_watts(dbm), area), dipole_si);
}

inline double rf_dbm_from_rabi(double rabi, double dipole_si,
                               double area = kDefaultRfAperture) {
  return watts_to_dbm(rf_efield_to_power(field_from_rabi(rabi, dipole_si), area));
}

// On-off-keyed RF envelope. Bit k occupies [k/rate, (k+1)/rate).
struct OokWaveform {
  std::vector<uint8_t> bits;
  double data_rate = 0.0;       // bits/s
  double rabi_on = 0.0;         // RF Rabi while a 1 is sent (rad/s)

  void validate() const {
    if (bits.empty()) throw InvalidParameterError("OokWaveform: empty bit sequence");
    if (!(data_rate > 0.0)) {
      throw InvalidParameterError("OokWaveform: data_rate must be > 0");
    }
    if (!(rabi_on >= 0.0)) {
      throw InvalidParameterError("OokWaveform: rabi_on must be >= 0");
    }
    for (uint8_t b : bits) {
      if (b > 1) throw InvalidParameterError("OokWaveform: bits must be 0 or 1");
    }
  }

  double symbol_period() const { return 1.0 / data_rate; }
  double duration() const { return bits.size() * symbol_period(); }

  DriveChannel drive() const {
    validate();
    std::vector<double> values(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
      values[i] = bits[i] ? rabi_on : 0.0;
    }
    return DriveChannel::samples(std::move(values), symbol_period());
  }
};

}  // namespace stmr
