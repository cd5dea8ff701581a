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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "stmr/atomic/density.hpp"
#include "stmr/atomic/drives.hpp"
#include "stmr/atomic/ladder.hpp"
#include "stmr/atomic/master_equation.hpp"
#include "stmr/errors.hpp"

namespace stmr {

struct Rk4Options {
  bool check_invariants = true;
  double trace_tol = 1e-9;
  long positivity_stride = 100;
  double positivity_floor = -1e-7;
};

// Stability ceiling dt_max = 1/(50 f_max), f_max the largest frequency scale
// in the generator (detunings including the multi-photon combinations, peak
// Rabi values, decay and dephasing rates) in Hz.
inline double dt_ceiling(const LadderConfig& cfg, const Detunings& det,
                         const DriveValues& peak) {
  double w = std::max({std::abs(det.delta1), std::abs(det.delta2),
                       std::abs(det.delta3), std::abs(det.two_photon()),
                       std::abs(det.three_photon()), peak.omega_p,
                       peak.omega_c, peak.omega_rf, cfg.gamma_21,
                       cfg.gamma_32, cfg.gamma_43, cfg.transit_rate,
                       cfg.dephasing_gamma[0], cfg.dephasing_gamma[1],
                       cfg.dephasing_gamma[2]});
  const double f_max = w / constants::two_pi;
  return 1.0 / (50.0 * f_max);
}

namespace detail {

inline void check_state(const PackedRho& x, long step, const Rk4Options& o) {
  const double tr = x.trace();
  if (!std::isfinite(tr) || std::abs(tr - 1.0) > o.trace_tol) {
    throw NumericalInstabilityError(
        "trace drifted to " + std::to_string(tr), step);
  }
}

inline void check_positivity(const PackedRho& x, long step,
                             const Rk4Options& o) {
  if (x.gershgorin_lower_bound() >= o.positivity_floor) return;
  const double lam = min_eigenvalue(x.unpack());
  if (lam < o.positivity_floor) {
    throw NumericalInstabilityError(
        "negative eigenvalue " + std::to_string(lam), step);
  }
}

// One classic RK4 step with the drive frozen at its left-endpoint value.
inline void rk4_step(const LadderRhs& rhs, const DriveValues& dv, double dt,
                     PackedRho& x) {
  double k1[16], k2[16], k3[16], k4[16], tmp[16];
  rhs(x.x, dv.omega_p, dv.omega_c, dv.omega_rf, k1);
  const double h2 = 0.5 * dt;
  for (int i = 0; i < 16; ++i) tmp[i] = x.x[i] + h2 * k1[i];
  rhs(tmp, dv.omega_p, dv.omega_c, dv.omega_rf, k2);
  for (int i = 0; i < 16; ++i) tmp[i] = x.x[i] + h2 * k2[i];
  rhs(tmp, dv.omega_p, dv.omega_c, dv.omega_rf, k3);
  for (int i = 0; i < 16; ++i) tmp[i] = x.x[i] + dt * k3[i];
  rhs(tmp, dv.omega_p, dv.omega_c, dv.omega_rf, k4);
  const double h6 = dt / 6.0;
  for (int i = 0; i < 16; ++i) {
    x.x[i] += h6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  }
}

}  // namespace detail

// Fixed-step integration over n_steps of size dt starting at t0. The observer
// is called as obs(step, t, state) at step 0, every `stride` steps, and at
// the final step. Returns the final state.
template <class Observer>
PackedRho integrate_observe(PackedRho x, const LadderRhs& rhs,
                            const DriveSet& drives, double t0, long n_steps,
                            double dt, long stride, Observer&& obs,
                            const Rk4Options& opts = {}) {
  if (!(dt > 0.0)) throw InvalidParameterError("integrate: dt must be > 0");
  if (n_steps < 0) throw InvalidParameterError("integrate: n_steps < 0");
  if (stride < 1) stride = 1;
  obs(0L, t0, x);
  for (long s = 0; s < n_steps; ++s) {
    const double t = t0 + static_cast<double>(s) * dt;
    detail::rk4_step(rhs, drives.at(t), dt, x);
    const long done = s + 1;
    if (opts.check_invariants) {
      detail::check_state(x, done, opts);
      if (done % opts.positivity_stride == 0) {
        detail::check_positivity(x, done, opts);
      }
    }
    if (done % stride == 0 || done == n_steps) {
      obs(done, t0 + static_cast<double>(done) * dt, x);
    }
  }
  return x;
}

struct RhoSeries {
  std::vector<double> t;
  std::vector<DensityMatrix> rho;
};

// Reference entry point: full density-matrix series at every step.
// Checks dt against the stability ceiling for the given drives.
inline RhoSeries integrate_rk4(const DensityMatrix& rho0, const Detunings& det,
                               const DriveSet& drives, const LadderConfig& cfg,
                               double t0, double t1, double dt,
                               const Rk4Options& opts = {}) {
  cfg.validate();
  det.validate();
  if (!(dt > 0.0)) throw InvalidParameterError("integrate_rk4: dt must be > 0");
  const double ceiling = dt_ceiling(cfg, det, drives.peak());
  if (dt > ceiling * (1.0 + 1e-12)) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "integrate_rk4: dt=%.6g exceeds stability ceiling %.6g",
                  dt, ceiling);
    throw StepSizeError(buf);
  }
  if (!(t1 >= t0)) throw InvalidParameterError("integrate_rk4: t1 < t0");
  if (hermiticity_defect(rho0) > 1e-12) {
    throw InvalidParameterError("integrate_rk4: rho0 is not Hermitian");
  }
  const double span = t1 - t0;
  const long n_steps = std::lround(span / dt);
  if (std::abs(static_cast<double>(n_steps) * dt - span) >
      1e-9 * std::max(span, dt)) {
    throw InvalidParameterError(
        "integrate_rk4: (t1 - t0) must be an integer multiple of dt");
  }
  const LadderRhs rhs(cfg, det);
  RhoSeries series;
  series.t.reserve(n_steps + 1);
  series.rho.reserve(n_steps + 1);
  integrate_observe(
      PackedRho::pack(rho0), rhs, drives, t0, n_steps, dt, 1,
      [&](long /*step*/, double t, const PackedRho& x) {
        series.t.push_back(t);
        series.rho.push_back(x.unpack());
      },
      opts);
  return series;
}

struct SteadyOptions {
  double flatness_tol = 1e-5;   // normalised |d rho21/dt| bound over the tail
  double t_min = 0.0;           // 0 selects 10 / gamma_21
  double t_max_factor = 64.0;   // give up at t_min * factor
  Rk4Options rk4{};
};

struct SteadyResult {
  PackedRho state{};
  double t_end = 0.0;
  double residual = 0.0;
};

// Integrates with constant drives until rho21 stops evolving. The residual is
// the largest |d rho21/dt| / (gamma_21 max(|rho21|, 1e-12)) seen at any step
// in the trailing 10% of the window, i.e. the fractional drift per radiative
// lifetime; a sampled-difference test would alias against the Rabi-frequency
// coherence oscillations. The window grows geometrically until the residual
// drops below flatness_tol, or ConvergenceError at t_max.
inline SteadyResult integrate_to_steady(PackedRho x, const LadderRhs& rhs,
                                        const DriveValues& dv,
                                        const LadderConfig& cfg, double dt,
                                        const SteadyOptions& sopts = {}) {
  if (!(dt > 0.0)) throw InvalidParameterError("steady: dt must be > 0");
  // Default initial horizon: ten 1/Gamma21 lifetimes.
  const double horizon0 =
      sopts.t_min > 0.0 ? sopts.t_min : 10.0 / cfg.gamma_21;
  const double t_max = horizon0 * sopts.t_max_factor;

  const DriveSet const_drives{DriveChannel::constant(dv.omega_p),
                              DriveChannel::constant(dv.omega_c),
                              DriveChannel::constant(dv.omega_rf)};
  const auto drift = [&](const PackedRho& xs) {
    double k[16];
    rhs(xs.x, dv.omega_p, dv.omega_c, dv.omega_rf, k);
    const std::complex<double> d{k[4], k[5]};
    return std::abs(d) /
           (cfg.gamma_21 * std::max(std::abs(xs.rho21()), 1e-12));
  };

  long done = 0;
  double horizon = horizon0;
  double residual = 0.0;
  const auto quiet = [](long, double, const PackedRho&) {};
  while (true) {
    const long n_total = std::max(1L, std::lround(horizon / dt));
    const long n_quiet = std::lround(0.9 * horizon / dt);
    if (n_quiet > done) {
      x = integrate_observe(x, rhs, const_drives, done * dt, n_quiet - done,
                            dt, n_quiet - done, quiet, sopts.rk4);
      done = n_quiet;
    }
    residual = 0.0;
    x = integrate_observe(
        x, rhs, const_drives, done * dt, n_total - done, dt, 1,
        [&](long, double, const PackedRho& xs) {
          residual = std::max(residual, drift(xs));
        },
        sopts.rk4);
    done = n_total;
    if (residual < sopts.flatness_tol) {
      return SteadyResult{x, done * dt, residual};
    }
    if (horizon >= t_max * (1.0 - 1e-12)) {
      throw ConvergenceError("steady state not reached by t_max", residual);
    }
    horizon = std::min(horizon * 1.5, t_max);
  }
}

}  // namespace stmr
