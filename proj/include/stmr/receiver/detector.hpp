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

#include "stmr/constants.hpp"
#include "stmr/errors.hpp"
#include "stmr/util/rng.hpp"

namespace stmr {

struct DetectorModel {
  double responsivity = 0.8;      // A/W
  double gain = 1e4;              // V/A transimpedance
  double bandwidth = 400e6;       // 3 dB bandwidth (Hz)
  double dark_current = 2e-9;     // A
  double load_resistance = 1e5;   // ohm, Johnson noise source
  double temperature = 295.0;     // K

  double time_constant() const { return 1.0 / (constants::two_pi * bandwidth); }

  void validate() const {
    if (!(responsivity > 0.0) || !(gain > 0.0) || !(bandwidth > 0.0) ||
        !(load_resistance > 0.0) || !(temperature > 0.0)) {
      throw InvalidParameterError(
          "DetectorModel: responsivity, gain, bandwidth, load_resistance and "
          "temperature must be > 0");
    }
    if (!(dark_current >= 0.0)) {
      throw InvalidParameterError("DetectorModel: dark_current must be >= 0");
    }
  }
};

// One-pole RC response, zero-order-hold discretization:
//   y[k] = a y[k-1] + (1 - a) u[k],  a = exp(-dt / tau).
// Unity DC gain; 10-90% step rise time ~= 0.35 / f3db.
inline std::vector<double> single_pole_lowpass(const std::vector<double>& u,
                                               double dt, double f3db) {
  if (!(dt > 0.0) || !(f3db > 0.0)) {
    throw InvalidParameterError("single_pole_lowpass: dt and f3db must be > 0");
  }
  const double a = std::exp(-dt * constants::two_pi * f3db);
  std::vector<double> y(u.size());
  double acc = 0.0;
  for (size_t k = 0; k < u.size(); ++k) {
    acc = a * acc + (1.0 - a) * u[k];
    y[k] = acc;
  }
  return y;
}

// Per-sample standard deviation (in volts) of the white noise process before
// band limiting. Shot + dark current and Johnson noise, two-sided density
// folded into the sampling bandwidth 1/(2 dt).
inline double noise_sigma_volts(const DetectorModel& det, double mean_current,
                                double dt) {
  if (!(dt > 0.0)) throw InvalidParameterError("noise_sigma_volts: dt must be > 0");
  const double i_total = std::abs(mean_current) + det.dark_current;
  const double s_shot = 2.0 * constants::elementary_charge * i_total;
  const double s_johnson =
      4.0 * constants::k_boltzmann * det.temperature / det.load_resistance;
  const double var_current = (s_shot + s_johnson) / (2.0 * dt);
  return det.gain * std::sqrt(var_current);
}

// Band-limited zero-mean voltage noise trace, n samples at spacing dt.
inline std::vector<double> noise_trace(const DetectorModel& det,
                                       double mean_current, double dt, size_t n,
                                       uint64_t seed) {
  const double sigma = noise_sigma_volts(det, mean_current, dt);
  std::vector<double> white(n, 0.0);
  if (sigma > 0.0) {
    GaussianRng rng(seed);
    for (size_t k = 0; k < n; ++k) white[k] = sigma * rng();
  }
  return single_pole_lowpass(white, dt, det.bandwidth);
}

// Noiseless detection: optical power -> photocurrent -> transimpedance ->
// band limit.
inline std::vector<double> detect_noiseless(const std::vector<double>& power,
                                            double dt,
                                            const DetectorModel& det) {
  det.validate();
  std::vector<double> v(power.size());
  for (size_t k = 0; k < power.size(); ++k) {
    v[k] = det.gain * det.responsivity * power[k];
  }
  return single_pole_lowpass(v, dt, det.bandwidth);
}

// Noisy detection; mean_current sets the shot-noise level (photocurrent
// averaged over the illuminated part of the record).
inline std::vector<double> detect(const std::vector<double>& power, double dt,
                                  const DetectorModel& det, double mean_current,
                                  uint64_t seed) {
  std::vector<double> v = detect_noiseless(power, dt, det);
  std::vector<double> nz = noise_trace(det, mean_current, dt, power.size(), seed);
  for (size_t k = 0; k < v.size(); ++k) v[k] += nz[k];
  return v;
}

}  // namespace stmr
