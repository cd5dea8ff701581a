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

#include "stmr/atomic/rk4.hpp"
#include "stmr/optical/doppler.hpp"
#include "stmr/util/parallel.hpp"

namespace stmr {

// Uniform recording grid: n intervals of dt starting at t = 0, so a series
// holds n + 1 samples including both endpoints.
struct TraceGrid {
  double dt = 0.0;
  long n = 0;

  double window() const { return dt * static_cast<double>(n); }

  void validate() const {
    if (!(dt > 0.0) || n < 1) {
      throw InvalidParameterError("TraceGrid: dt must be > 0 and n >= 1");
    }
  }
};

// rho21(t) of a single velocity class on the recording grid. The internal
// step subdivides the grid spacing until it clears the stability ceiling
// (tightened by dt_factor >= 1).
inline std::vector<std::complex<double>> simulate_class_rho21(
    const LadderConfig& cfg, const Detunings& base, double v,
    const DriveSet& drives, const TraceGrid& grid, double dt_factor = 1.0,
    const Rk4Options& opts = {}) {
  grid.validate();
  if (!(dt_factor >= 1.0)) {
    throw InvalidParameterError("simulate_class_rho21: dt_factor must be >= 1");
  }
  const Detunings det =
      doppler_detunings(base, v, cfg.lambda_probe, cfg.lambda_coupling);
  const double ceiling =
      dt_ceiling(cfg, det, drives.peak()) / dt_factor;
  const long m = std::max(1L, static_cast<long>(std::ceil(grid.dt / ceiling)));
  const double dt = grid.dt / static_cast<double>(m);
  const LadderRhs rhs(cfg, det);

  std::vector<std::complex<double>> series;
  series.reserve(grid.n + 1);
  integrate_observe(
      PackedRho::pack(ground_state()), rhs, drives, 0.0, grid.n * m, dt, m,
      [&](long step, double /*t*/, const PackedRho& x) {
        if (step % m == 0) series.push_back(x.rho21());
      },
      opts);
  return series;
}

// Doppler-averaged rho21(t): integrates every velocity class on the shared
// grid and reduces with renormalized Maxwell-Boltzmann weights in fixed
// class order.
inline std::vector<std::complex<double>> ensemble_rho21(
    const LadderConfig& cfg, const Detunings& base, const DriveSet& drives,
    const TraceGrid& grid, const VelocityGrid& vgrid, int n_threads = 1,
    double dt_factor = 1.0, const Rk4Options& opts = {}) {
  const std::size_t n_classes = vgrid.velocities.size();
  std::vector<std::vector<std::complex<double>>> per_class(n_classes);
  parallel_for(n_classes, n_threads, [&](std::size_t k) {
    per_class[k] = simulate_class_rho21(cfg, base, vgrid.velocities[k],
                                        drives, grid, dt_factor, opts);
  });
  return doppler_average_rho21(per_class, vgrid);
}

// Doppler-averaged steady-state rho21 for constant drives.
inline std::complex<double> ensemble_rho21_steady(
    const LadderConfig& cfg, const Detunings& base, const DriveValues& dv,
    const VelocityGrid& vgrid, int n_threads = 1, double dt_factor = 1.0,
    const SteadyOptions& sopts = {}) {
  const std::size_t n_classes = vgrid.velocities.size();
  std::vector<std::complex<double>> per_class(n_classes);
  parallel_for(n_classes, n_threads, [&](std::size_t k) {
    const Detunings det =
        doppler_detunings(base, vgrid.velocities[k], cfg.lambda_probe,
                          cfg.lambda_coupling);
    const DriveValues peak{dv.omega_p, dv.omega_c, dv.omega_rf};
    const double dt = dt_ceiling(cfg, det, peak) / dt_factor;
    const LadderRhs rhs(cfg, det);
    per_class[k] =
        integrate_to_steady(PackedRho::pack(ground_state()), rhs, dv, cfg,
                            dt, sopts)
            .state.rho21();
  });
  const double wsum = vgrid.weight_sum();
  std::complex<double> avg{0.0, 0.0};
  for (std::size_t k = 0; k < n_classes; ++k) {
    avg += (vgrid.weights[k] / wsum) * per_class[k];
  }
  return avg;
}

}  // namespace stmr
