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
#include <vector>

#include "stmr/atomic/drives.hpp"
#include "stmr/atomic/ladder.hpp"
#include "stmr/atomic/rk4.hpp"
#include "stmr/errors.hpp"
#include "stmr/optical/doppler.hpp"
#include "stmr/optical/ensemble.hpp"
#include "stmr/optical/response.hpp"
#include "stmr/optical/vapor.hpp"
#include "stmr/receiver/detector.hpp"
#include "stmr/receiver/schedule.hpp"

namespace stmr {

// Everything on the optical table: atoms, cell, lasers. RF drive and probe
// timing are supplied per experiment.
struct OpticalBench {
  LadderConfig atomic;
  VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  Detunings detunings;             // carrier detunings, zero = on resonance
  double probe_power = 4.7e-6;     // W into the cell
  double coupling_power = 0.6;     // W
  double coupling_waist = 200e-6;  // m
  double output_scale = 1.0;       // optics -> detector coupling efficiency

  double probe_field() const {
    return gaussian_peak_field(probe_power, atomic.beam_waist);
  }
  double omega_probe() const {
    return atomic.d21_si() * probe_field() / constants::hbar;
  }
  double omega_coupling() const {
    return atomic.d32_si() * gaussian_peak_field(coupling_power, coupling_waist) /
           constants::hbar;
  }

  void validate() const {
    atomic.validate();
    cell.validate();
    detunings.validate();
    if (!(probe_power > 0.0) || !(coupling_power > 0.0) ||
        !(coupling_waist > 0.0)) {
      throw InvalidParameterError(
          "OpticalBench: probe_power, coupling_power, coupling_waist must be "
          "> 0");
    }
    if (!(output_scale > 0.0)) {
      throw InvalidParameterError("OpticalBench: output_scale must be > 0");
    }
  }
};

// Recording grid for a probe pulse of width T: resolves both the pulse shape
// and the detector response, and extends past the pulse to catch the filter
// tail.
inline TraceGrid pulse_trace_grid(double pulse_width,
                                  const DetectorModel& det,
                                  double window_factor = 1.5,
                                  int min_samples_per_pulse = 256) {
  if (!(pulse_width > 0.0) || !(window_factor >= 1.0)) {
    throw InvalidParameterError(
        "pulse_trace_grid: pulse_width must be > 0 and window_factor >= 1");
  }
  const double tau = det.time_constant();
  const double dt_raw =
      std::min(pulse_width / static_cast<double>(min_samples_per_pulse),
               0.5 * tau);
  const double window = window_factor * pulse_width;
  TraceGrid grid;
  grid.n = static_cast<long>(std::ceil(window / dt_raw));
  grid.dt = window / static_cast<double>(grid.n);
  return grid;
}

// One probe pulse simulated through the full chain for RF on and RF off,
// noiseless. Both traces share the grid and the shot-noise operating point.
struct DetectedPulsePair {
  TraceGrid grid;
  std::vector<double> t;
  std::vector<double> p_in;                 // W at the cell entrance
  std::vector<double> p_out_on, p_out_off;  // W after the cell
  std::vector<double> p_abs_on, p_abs_off;  // absorbed power fed to detection
  std::vector<double> v_on, v_off;          // noiseless detector volts
  double mean_current = 0.0;                // photocurrent for shot noise
  bool gain_warning = false;
  bool relax_warning = false;  // repetition period < 5 / Gamma21
};

inline DetectedPulsePair simulate_detected_pair(
    const OpticalBench& bench, double pulse_width, double rep_period,
    double omega_rf_on, const DetectorModel& det, const VelocityGrid& vgrid,
    int n_threads = 1, double dt_factor = 1.0, double window_factor = 1.5,
    const Rk4Options& opts = Rk4Options{}) {
  bench.validate();
  det.validate();
  if (!(pulse_width > 0.0) || !(rep_period > pulse_width)) {
    throw InvalidParameterError(
        "simulate_detected_pair: need 0 < pulse_width < rep_period");
  }
  if (!(omega_rf_on >= 0.0)) {
    throw InvalidParameterError(
        "simulate_detected_pair: omega_rf_on must be >= 0");
  }

  DetectedPulsePair pair;
  pair.relax_warning = rep_period < 5.0 / bench.atomic.gamma_21;
  pair.grid = pulse_trace_grid(pulse_width, det, window_factor);

  const double om_p = bench.omega_probe();
  const double om_c = bench.omega_coupling();
  DriveSet drives_on{DriveChannel::pulse(om_p, 0.0, pulse_width),
                     DriveChannel::constant(om_c),
                     DriveChannel::constant(omega_rf_on)};
  DriveSet drives_off{drives_on.probe, drives_on.coupling,
                      DriveChannel::constant(0.0)};

  const auto r21_on =
      ensemble_rho21(bench.atomic, bench.detunings, drives_on, pair.grid,
                     vgrid, n_threads, dt_factor, opts);
  const auto r21_off =
      ensemble_rho21(bench.atomic, bench.detunings, drives_off, pair.grid,
                     vgrid, n_threads, dt_factor, opts);

  const std::size_t n = r21_on.size();
  pair.t.resize(n);
  pair.p_in.resize(n);
  std::vector<double> e_p(n);
  const double e_peak = bench.probe_field();
  for (std::size_t i = 0; i < n; ++i) {
    pair.t[i] = pair.grid.dt * static_cast<double>(i);
    const double frac = om_p > 0.0 ? drives_on.probe.at(pair.t[i]) / om_p : 0.0;
    e_p[i] = e_peak * frac;
    pair.p_in[i] = bench.probe_power * frac * frac;
  }

  const auto chi_on = susceptibility(r21_on, e_p, bench.atomic, bench.cell);
  const auto chi_off = susceptibility(r21_off, e_p, bench.atomic, bench.cell);
  auto tr_on =
      transmit(pair.p_in, chi_on, bench.atomic.lambda_probe, bench.cell.length);
  auto tr_off = transmit(pair.p_in, chi_off, bench.atomic.lambda_probe,
                         bench.cell.length);
  pair.gain_warning = tr_on.gain_warning || tr_off.gain_warning;
  pair.p_out_on = std::move(tr_on.p_out);
  pair.p_out_off = std::move(tr_off.p_out);

  pair.p_abs_on.resize(n);
  pair.p_abs_off.resize(n);
  double current_acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pair.p_abs_on[i] = bench.output_scale * (pair.p_in[i] - pair.p_out_on[i]);
    pair.p_abs_off[i] = bench.output_scale * (pair.p_in[i] - pair.p_out_off[i]);
    current_acc +=
        pair.p_in[i] + 0.5 * (pair.p_out_on[i] + pair.p_out_off[i]);
  }
  pair.mean_current =
      det.responsivity * current_acc / static_cast<double>(n);

  pair.v_on = detect_noiseless(pair.p_abs_on, pair.grid.dt, det);
  pair.v_off = detect_noiseless(pair.p_abs_off, pair.grid.dt, det);
  return pair;
}

// Noisy per-pulse voltage records for a pulse train. The deterministic part
// is one pair simulation; pulses differ by their noise draws.
struct PulseResponse {
  DetectedPulsePair pair;
  std::vector<std::vector<double>> v_on_j;
  std::vector<std::vector<double>> v_off_j;
};

inline PulseResponse simulate_pulse_response(
    const OpticalBench& bench, const PulseTrain& train, double omega_rf_on,
    const DetectorModel& det, const VelocityGrid& vgrid, uint64_t seed,
    int n_threads = 1, double dt_factor = 1.0,
    const Rk4Options& opts = Rk4Options{}) {
  train.validate();
  PulseResponse resp;
  resp.pair = simulate_detected_pair(bench, train.pulse_width,
                                     train.rep_period, omega_rf_on, det, vgrid,
                                     n_threads, dt_factor, 1.5, opts);
  const std::size_t n = resp.pair.v_on.size();
  resp.v_on_j.resize(train.n_pulses);
  resp.v_off_j.resize(train.n_pulses);
  for (int j = 0; j < train.n_pulses; ++j) {
    auto on = resp.pair.v_on;
    auto nz_on = noise_trace(det, resp.pair.mean_current, resp.pair.grid.dt, n,
                             derive_seed(seed, 0, static_cast<uint64_t>(j)));
    auto off = resp.pair.v_off;
    auto nz_off = noise_trace(det, resp.pair.mean_current, resp.pair.grid.dt,
                              n, derive_seed(seed, 1, static_cast<uint64_t>(j)));
    for (std::size_t i = 0; i < n; ++i) {
      on[i] += nz_on[i];
      off[i] += nz_off[i];
    }
    resp.v_on_j[j] = std::move(on);
    resp.v_off_j[j] = std::move(off);
  }
  return resp;
}

}  // namespace stmr
