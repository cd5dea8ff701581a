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
#include <vector>

#include "stmr/optical/ensemble.hpp"
#include "stmr/optical/response.hpp"
#include "stmr/optical/vapor.hpp"

namespace stmr {

struct SpectrumResult {
  std::vector<double> delta2;        // rad/s
  std::vector<double> transmission;  // P_out / P_in
};

// Steady-state Doppler-averaged probe transmission versus coupling detuning.
// Each sweep point integrates every velocity class to steady state; the
// probe stays at the configured resonance (delta1 from `base`).
inline SpectrumResult eit_spectrum(const LadderConfig& cfg,
                                   const VaporCellParams& cell,
                                   const DriveValues& amplitudes,
                                   double probe_field,
                                   const std::vector<double>& delta2_sweep,
                                   bool rf_on, const Detunings& base,
                                   const VelocityGrid& vgrid,
                                   int n_threads = 1, double dt_factor = 1.0,
                                   const SteadyOptions& sopts = {}) {
  cfg.validate();
  cell.validate();
  if (delta2_sweep.empty()) {
    throw InvalidParameterError("eit_spectrum: empty detuning sweep");
  }
  DriveValues dv = amplitudes;
  if (!rf_on) dv.omega_rf = 0.0;

  const std::size_t n_points = delta2_sweep.size();
  const std::size_t n_classes = vgrid.velocities.size();
  std::vector<std::complex<double>> per_task(n_points * n_classes);
  // Flattened (point, class) task list for even load balancing.
  parallel_for(n_points * n_classes, n_threads, [&](std::size_t task) {
    const std::size_t ip = task / n_classes;
    const std::size_t kc = task % n_classes;
    Detunings det = base;
    det.delta2 = delta2_sweep[ip];
    det = doppler_detunings(det, vgrid.velocities[kc], cfg.lambda_probe,
                            cfg.lambda_coupling);
    const double dt = dt_ceiling(cfg, det, dv) / dt_factor;
    const LadderRhs rhs(cfg, det);
    per_task[task] =
        integrate_to_steady(PackedRho::pack(ground_state()), rhs, dv, cfg,
                            dt, sopts)
            .state.rho21();
  });

  const double wsum = vgrid.weight_sum();
  const double k_p = constants::two_pi / cfg.lambda_probe;
  SpectrumResult res;
  res.delta2 = delta2_sweep;
  res.transmission.resize(n_points);
  for (std::size_t ip = 0; ip < n_points; ++ip) {
    std::complex<double> avg{0.0, 0.0};
    for (std::size_t kc = 0; kc < n_classes; ++kc) {
      avg += (vgrid.weights[kc] / wsum) * per_task[ip * n_classes + kc];
    }
    const std::complex<double> chi =
        susceptibility_at(avg, probe_field, cell.density_n0, cfg.d21_si());
    res.transmission[ip] = std::exp(-k_p * chi.imag() * cell.length);
  }
  return res;
}

// Separation (rad/s) of the two tallest local maxima, refined by parabolic
// interpolation. Used to read the Autler-Townes splitting off a spectrum.
inline double estimate_peak_separation(const SpectrumResult& spec) {
  const auto& x = spec.delta2;
  const auto& y = spec.transmission;
  if (y.size() < 3) throw Error("estimate_peak_separation: spectrum too short");

  struct Peak {
    double pos;
    double height;
  };
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
      // Parabola through the three samples around the maximum.
      const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
      double pos = x[i];
      if (denom != 0.0) {
        const double shift = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        pos += shift * (x[i + 1] - x[i]);
      }
      peaks.push_back({pos, y[i]});
    }
  }
  if (peaks.size() < 2) {
    throw Error("estimate_peak_separation: fewer than two peaks found");
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  return std::abs(peaks[0].pos - peaks[1].pos);
}

}  // namespace stmr
