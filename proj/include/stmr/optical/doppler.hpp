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
#include <complex>
#include <vector>

#include "stmr/atomic/ladder.hpp"
#include "stmr/constants.hpp"
#include "stmr/errors.hpp"

namespace stmr {

// Axial velocity classes with quadrature weights for the 1-D
// Maxwell-Boltzmann density, truncated at +-4a with a = sqrt(kB T / m).
struct VelocityGrid {
  std::vector<double> velocities;  // m/s, ascending, symmetric about 0
  std::vector<double> weights;     // sum equals erf(4/sqrt(2))

  double weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// Doppler-shifted detunings for an atom moving at axial velocity v, with
// counter-propagating probe and coupling beams. The RF wavelength is long
// enough that its shift is negligible.
inline Detunings doppler_detunings(const Detunings& base, double v,
                                   double lambda_p, double lambda_c) {
  if (!std::isfinite(v)) {
    throw InvalidParameterError("doppler_detunings: non-finite velocity");
  }
  Detunings d = base;
  d.delta1 = base.delta1 - (constants::two_pi / lambda_p) * v;
  d.delta2 = base.delta2 + (constants::two_pi / lambda_c) * v;
  return d;
}

inline VelocityGrid build_velocity_grid(double temperature, double mass,
                                        int n_classes) {
  if (n_classes < 3 || n_classes % 2 == 0) {
    throw InvalidParameterError(
        "build_velocity_grid: n_classes must be odd and >= 3");
  }
  if (!(temperature > 0.0) || !(mass > 0.0)) {
    throw InvalidParameterError(
        "build_velocity_grid: temperature and mass must be > 0");
  }
  const double a = std::sqrt(constants::k_boltzmann * temperature / mass);
  const int half = (n_classes - 1) / 2;
  const double dv = 8.0 * a / (n_classes - 1);

  VelocityGrid grid;
  grid.velocities.resize(n_classes);
  grid.weights.resize(n_classes);
  double raw_sum = 0.0;
  for (int k = 0; k < n_classes; ++k) {
    const double v = (k - half) * dv;
    grid.velocities[k] = v;
    double w = std::exp(-v * v / (2.0 * a * a));
    if (k == 0 || k == n_classes - 1) w *= 0.5;  // trapezoid-rule ends
    grid.weights[k] = w;
    raw_sum += w;
  }
  // Scale so the weights sum to the exact Gaussian mass of the truncated
  // range, i.e. the trapezoid rule is normalized by the true integral.
  const double target = std::erf(4.0 / std::sqrt(2.0));
  for (double& w : grid.weights) w *= target / raw_sum;
  return grid;
}

// Weighted velocity average of per-class rho21 series sharing one time grid.
// Weights are renormalized to unit sum, so identical inputs average to
// themselves.
inline std::vector<std::complex<double>> doppler_average_rho21(
    const std::vector<std::vector<std::complex<double>>>& per_class,
    const VelocityGrid& grid) {
  if (per_class.size() != grid.velocities.size()) {
    throw ShapeError("doppler_average_rho21: class count != grid size");
  }
  if (per_class.empty()) {
    throw ShapeError("doppler_average_rho21: empty input");
  }
  const std::size_t n = per_class.front().size();
  for (const auto& series : per_class) {
    if (series.size() != n) {
      throw ShapeError("doppler_average_rho21: mismatched time grids");
    }
  }
  const double wsum = grid.weight_sum();
  std::vector<std::complex<double>> avg(n, {0.0, 0.0});
  for (std::size_t k = 0; k < per_class.size(); ++k) {
    const double w = grid.weights[k] / wsum;
    const auto& series = per_class[k];
    for (std::size_t i = 0; i < n; ++i) avg[i] += w * series[i];
  }
  return avg;
}

}  // namespace stmr
