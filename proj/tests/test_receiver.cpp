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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "stmr/constants.hpp"
#include "stmr/errors.hpp"
#include "stmr/receiver/detector.hpp"
#include "stmr/receiver/ook.hpp"
#include "stmr/receiver/pulse_response.hpp"
#include "stmr/receiver/schedule.hpp"

using namespace stmr;
using Catch::Approx;

namespace {

constexpr double kTwoPi = constants::two_pi;

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double var_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / (v.size() - 1);
}

// Lag-k sample autocorrelation of a zero-mean stationary series.
double autocorr(const std::vector<double>& v, size_t lag) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i + lag < v.size(); ++i) num += v[i] * v[i + lag];
  for (double x : v) den += x * x;
  return num / den;
}

}  // namespace

TEST_CASE("stm schedule with 50 beams tiles the repetition period") {
  const double f_s = 100e6, f_r = 2e6, t_pulse = 10e-9;
  const StmSchedule s = make_stm_schedule(f_s, f_r, t_pulse);

  CHECK(s.n_beams == 50);
  CHECK(s.coverage_fraction() == Approx(1.0).epsilon(1e-12));
  CHECK(s.full_coverage());
  REQUIRE(s.beams.size() == 50);
  for (int k = 0; k < 50; ++k) {
    CHECK(s.beams[k].start_offset == Approx(k * t_pulse).margin(1e-18));
    CHECK(s.beams[k].pulse_width == t_pulse);
    CHECK(s.beams[k].rep_period == Approx(1.0 / f_r));
  }
  // Exactly one beam covers any instant of the 500 ns period.
  for (int i = 0; i < 2000; ++i) {
    const double t = 500e-9 * (i + 0.37) / 2000.0;
    CAPTURE(t);
    CHECK(s.coverage_count(t) == 1);
  }
  CHECK(s.coverage_count(1.2345e-3 + 3e-9) == 1);  // far beyond period one
}

TEST_CASE("schedule coverage property holds over random rate pairs") {
  std::mt19937_64 gen(4242);
  // N = 1 with full-width pulses would be a duty-1 train, which the
  // schedule rejects; full coverage needs at least two beams.
  std::uniform_int_distribution<int> pick_n(2, 128);
  std::uniform_real_distribution<double> pick_fr(0.5e6, 10e6);
  std::uniform_real_distribution<double> pick_u(0.0, 1.0);

  for (int trial = 0; trial < 100; ++trial) {
    const int n = pick_n(gen);
    const double f_r = pick_fr(gen);
    const double f_s = n * f_r;
    const StmSchedule s = make_stm_schedule(f_s, f_r, 1.0 / f_s);
    CAPTURE(trial, n, f_r);
    REQUIRE(s.n_beams == n);
    CHECK(s.full_coverage());
    for (int i = 0; i < 20; ++i) {
      const double t = pick_u(gen) * 3.0 / f_r;
      CHECK(s.coverage_count(t) == 1);
    }
  }

  // A shorter pulse leaves a gap: the beams pack back to back at k T, so
  // 60% of the period is covered once and the tail not at all.
  const StmSchedule gappy = make_stm_schedule(100e6, 2e6, 6e-9);
  CHECK(gappy.coverage_fraction() == Approx(0.6));
  CHECK_FALSE(gappy.full_coverage());
  int covered = 0;
  for (int i = 0; i < 5000; ++i) {
    const int c = gappy.coverage_count(500e-9 * (i + 0.37) / 5000.0);
    CHECK(c <= 1);
    covered += c;
  }
  CHECK(covered == Approx(3000).epsilon(0.01));
}

TEST_CASE("schedule construction rejects bad rate combinations") {
  CHECK_THROWS_AS(make_stm_schedule(5e6, 2e6, 1e-9), ScheduleError);
  CHECK_THROWS_AS(make_stm_schedule(100e6, 2e6, 11e-9), ScheduleError);
  CHECK_THROWS_AS(make_stm_schedule(0.0, 2e6, 1e-9), InvalidParameterError);
  CHECK_THROWS_AS(make_stm_schedule(100e6, -2e6, 1e-9),
                  InvalidParameterError);
  CHECK_THROWS_AS(make_stm_schedule(100e6, 2e6, 0.0), InvalidParameterError);
  // The boundary case T = 1/f_s is allowed.
  CHECK_NOTHROW(make_stm_schedule(100e6, 2e6, 10e-9));
}

TEST_CASE("pulse train validation guards the duty cycle") {
  PulseTrain t;
  t.pulse_width = 10e-9;
  t.rep_period = 500e-9;
  CHECK_NOTHROW(t.validate());

  PulseTrain bad = t;
  bad.pulse_width = 600e-9;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = t;
  bad.pulse_width = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = t;
  bad.n_pulses = 0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = t;
  bad.start_offset = -1e-9;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("power unit conversions round-trip") {
  CHECK(watts_to_dbm(1e-3) == Approx(0.0).margin(1e-12));
  CHECK(dbm_to_watts(0.0) == Approx(1e-3).epsilon(1e-12));
  CHECK(dbm_to_watts(-30.0) == Approx(1e-6).epsilon(1e-12));
  for (double dbm : {-55.0, -44.12, -25.0, 3.0}) {
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == Approx(dbm).margin(1e-10));
  }
  CHECK_THROWS_AS(watts_to_dbm(0.0), InvalidParameterError);
  CHECK_THROWS_AS(watts_to_dbm(-1e-3), InvalidParameterError);

  for (double w : {1e-9, 3.87e-8, 1e-3}) {
    CHECK(rf_efield_to_power(rf_power_to_efield(w)) ==
          Approx(w).epsilon(1e-12));
  }
  CHECK(rf_power_to_efield(0.0) == 0.0);
  CHECK_THROWS_AS(rf_power_to_efield(1e-6, 0.0), InvalidParameterError);
}

TEST_CASE("rf power anchors the benchmark rabi frequency") {
  LadderConfig cfg;
  const double d43 = cfg.d43_si();

  // Frozen plane-wave arithmetic for the default aperture.
  CHECK(rf_rabi_from_dbm(-44.12, d43) / kTwoPi ==
        Approx(1.71033284e7).epsilon(1e-7));
  CHECK(rf_rabi_from_dbm(-25.0, d43) / kTwoPi ==
        Approx(1.54554137e8).epsilon(1e-7));
  CHECK(rf_rabi_from_dbm(-55.0, d43) / kTwoPi ==
        Approx(4.88743094e6).epsilon(1e-7));

  // The benchmark tone: -44.12 dBm drives a 17.11 MHz Rabi frequency.
  CHECK(rf_rabi_from_dbm(-44.12, d43) / kTwoPi ==
        Approx(17.11e6).epsilon(1e-3));
  CHECK(rf_dbm_from_rabi(kTwoPi * 17.11e6, d43) ==
        Approx(-44.11661249).margin(1e-6));
  CHECK(rf_dbm_from_rabi(kTwoPi * 17.11e6, d43) ==
        Approx(-44.12).margin(0.01));

  // Rabi scales as sqrt of power: +20 dB is a factor of 10 in field.
  CHECK(rf_rabi_from_dbm(-24.12, d43) ==
        Approx(10.0 * rf_rabi_from_dbm(-44.12, d43)).epsilon(1e-12));

  CHECK(rabi_from_field(field_from_rabi(1e8, d43), d43) ==
        Approx(1e8).epsilon(1e-12));
  CHECK_THROWS_AS(field_from_rabi(1e8, 0.0), InvalidParameterError);
}

TEST_CASE("ook waveform maps bits onto the rf envelope") {
  OokWaveform wf;
  wf.bits = {1, 0, 1, 1};
  wf.data_rate = 10e6;
  wf.rabi_on = kTwoPi * 17.11e6;

  CHECK(wf.symbol_period() == Approx(100e-9));
  CHECK(wf.duration() == Approx(400e-9));

  const DriveChannel ch = wf.drive();
  CHECK(ch.at(50e-9) == wf.rabi_on);
  CHECK(ch.at(150e-9) == 0.0);
  CHECK(ch.at(250e-9) == wf.rabi_on);
  CHECK(ch.at(350e-9) == wf.rabi_on);
  CHECK(ch.at(1e-3) == wf.rabi_on);  // last symbol holds
  CHECK(ch.peak() == wf.rabi_on);

  OokWaveform bad = wf;
  bad.bits.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = wf;
  bad.bits = {0, 2};
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = wf;
  bad.data_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("noiseless detection is linear with a one-pole step response") {
  DetectorModel det;
  const double dt = 5e-11;

  const std::vector<double> dark(100, 0.0);
  for (double v : detect_noiseless(dark, dt, det)) CHECK(v == 0.0);

  std::vector<double> step(200, 1e-6);
  const auto v1 = detect_noiseless(step, dt, det);
  std::vector<double> step2(200, 2e-6);
  const auto v2 = detect_noiseless(step2, dt, det);
  for (size_t i = 0; i < v1.size(); ++i) {
    CHECK(v2[i] == Approx(2.0 * v1[i]).epsilon(1e-12));
  }

  // 10-90% rise time of the RC response: ln(9) / (2 pi f3db).
  const double v_final = det.gain * det.responsivity * 1e-6;
  CHECK(v1.back() == Approx(v_final).epsilon(1e-6));
  double t10 = -1.0, t90 = -1.0;
  for (size_t i = 0; i < v1.size(); ++i) {
    if (t10 < 0.0 && v1[i] >= 0.1 * v_final) t10 = i * dt;
    if (t90 < 0.0 && v1[i] >= 0.9 * v_final) t90 = i * dt;
  }
  const double expect_rise = std::log(9.0) / (kTwoPi * det.bandwidth);
  CHECK(t90 - t10 == Approx(expect_rise).epsilon(0.08));

  CHECK_THROWS_AS(single_pole_lowpass(step, 0.0, det.bandwidth),
                  InvalidParameterError);
  CHECK_THROWS_AS(single_pole_lowpass(step, dt, 0.0), InvalidParameterError);
}

TEST_CASE("noise sigma combines shot, dark and johnson terms") {
  DetectorModel det;
  // Frozen arithmetic at 1 uA photocurrent, 1 ns samples.
  CHECK(noise_sigma_volts(det, 1e-6, 1e-9) ==
        Approx(1.5556233147e-4).epsilon(1e-9));

  // More photocurrent, more shot noise; the sign of the current is ignored.
  CHECK(noise_sigma_volts(det, 2e-6, 1e-9) >
        noise_sigma_volts(det, 1e-6, 1e-9));
  CHECK(noise_sigma_volts(det, -1e-6, 1e-9) ==
        noise_sigma_volts(det, 1e-6, 1e-9));

  // Zero current still leaves dark-current shot noise and Johnson noise.
  CHECK(noise_sigma_volts(det, 0.0, 1e-9) > 0.0);
  DetectorModel quiet = det;
  quiet.dark_current = 0.0;
  quiet.load_resistance = 1e300;
  CHECK(noise_sigma_volts(quiet, 0.0, 1e-9) < 1e-140);

  // Shot-dominated regime: variance doubles with the current.
  DetectorModel shot = quiet;
  const double s1 = noise_sigma_volts(shot, 1e-6, 1e-9);
  const double s2 = noise_sigma_volts(shot, 2e-6, 1e-9);
  CHECK(s2 * s2 == Approx(2.0 * s1 * s1).epsilon(1e-12));

  CHECK_THROWS_AS(noise_sigma_volts(det, 1e-6, 0.0), InvalidParameterError);
  DetectorModel bad = det;
  bad.dark_current = -1e-9;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = det;
  bad.bandwidth = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("noise trace statistics match the band-limited model") {
  DetectorModel det;
  const double dt = 1e-10;
  const size_t n = 200000;
  const auto nz = noise_trace(det, 1e-6, dt, n, 915);

  // The one-pole ZOH filter turns white noise into an AR(1) process with
  // parameter a = exp(-2 pi f3db dt) = 0.777768 here.
  const double a = std::exp(-dt * kTwoPi * det.bandwidth);
  CHECK(a == Approx(0.777767679172).epsilon(1e-10));
  const double sigma = noise_sigma_volts(det, 1e-6, dt);
  const double var_expect = sigma * sigma * (1.0 - a) / (1.0 + a);

  CHECK(var_of(nz) == Approx(var_expect).epsilon(0.05));
  CHECK(std::abs(mean_of(nz)) < 5.0 * std::sqrt(var_expect / (n * 0.125)));
  CHECK(autocorr(nz, 1) == Approx(a).epsilon(0.02));
  CHECK(autocorr(nz, 3) == Approx(a * a * a).epsilon(0.06));

  // Seeded reproducibility and stream separation.
  const auto again = noise_trace(det, 1e-6, dt, 1000, 915);
  for (size_t i = 0; i < 1000; ++i) CHECK(again[i] == nz[i]);
  const auto other = noise_trace(det, 1e-6, dt, 1000, 916);
  size_t differing = 0;
  for (size_t i = 0; i < 1000; ++i) differing += (other[i] != nz[i]);
  CHECK(differing > 990);
}

TEST_CASE("noisy detection reduces to the noiseless chain when quiet") {
  DetectorModel quiet;
  quiet.dark_current = 0.0;
  quiet.load_resistance = 1e300;
  const double dt = 1e-10;
  std::vector<double> power(300);
  for (size_t i = 0; i < power.size(); ++i) {
    power[i] = 1e-6 * (i < 150 ? 1.0 : 0.0);
  }
  const auto noisy = detect(power, dt, quiet, 0.0, 123);
  const auto clean = detect_noiseless(power, dt, quiet);
  for (size_t i = 0; i < power.size(); ++i) {
    CHECK(noisy[i] == Approx(clean[i]).margin(1e-120));
  }
}

TEST_CASE("pulse trace grid resolves both pulse and detector") {
  DetectorModel det;
  const TraceGrid g10 = pulse_trace_grid(10e-9, det);
  CHECK(g10.window() == Approx(15e-9).epsilon(1e-12));
  CHECK(g10.dt <= 10e-9 / 256.0);
  CHECK(g10.dt <= 0.5 * det.time_constant());
  CHECK(g10.n * g10.dt == Approx(15e-9).epsilon(1e-12));

  // Long pulses are limited by the detector time constant instead.
  const TraceGrid g1000 = pulse_trace_grid(1000e-9, det);
  CHECK(g1000.dt <= 0.5 * det.time_constant());
  CHECK(g1000.dt > 1000e-9 / 1e5);
  CHECK(g1000.window() == Approx(1.5e-6).epsilon(1e-12));

  CHECK_THROWS_AS(pulse_trace_grid(0.0, det), InvalidParameterError);
  CHECK_THROWS_AS(pulse_trace_grid(10e-9, det, 0.5), InvalidParameterError);
}

TEST_CASE("detected pulse pair responds to the rf drive") {
  OpticalBench bench;
  DetectorModel det;
  const VelocityGrid vgrid =
      build_velocity_grid(295.0, constants::rb85_mass, 5);
  const double omega_rf = kTwoPi * 17.11e6;

  const DetectedPulsePair pair =
      simulate_detected_pair(bench, 50e-9, 1000e-9, omega_rf, det, vgrid);

  const std::size_t n = pair.v_on.size();
  REQUIRE(n == static_cast<std::size_t>(pair.grid.n + 1));
  REQUIRE(pair.t.size() == n);
  REQUIRE(pair.p_in.size() == n);
  REQUIRE(pair.p_out_on.size() == n);
  REQUIRE(pair.p_abs_off.size() == n);
  CHECK_FALSE(pair.relax_warning);
  CHECK_FALSE(pair.gain_warning);
  CHECK(pair.mean_current > 0.0);

  double s_peak = 0.0;
  double sum_on = 0.0, sum_off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Probe on during [0, 50 ns), off after; absorbed power never negative.
    if (pair.t[i] < 50e-9) {
      CHECK(pair.p_in[i] == Approx(bench.probe_power));
    } else {
      CHECK(pair.p_in[i] == 0.0);
      CHECK(pair.p_abs_on[i] == 0.0);
    }
    CHECK(pair.p_abs_on[i] >= 0.0);
    CHECK(pair.p_abs_off[i] >= 0.0);
    CHECK(pair.p_out_on[i] <= pair.p_in[i] * (1.0 + 1e-12));
    s_peak = std::max(s_peak, std::abs(pair.v_on[i] - pair.v_off[i]));
    sum_on += pair.v_on[i];
    sum_off += pair.v_off[i];
  }
  CHECK(s_peak > 0.0);
  // Resonant RF splits the transparency window, so more probe light is
  // absorbed with the field on.
  CHECK(sum_on > sum_off);

  // Deterministic: an identical call reproduces the traces bit for bit.
  const DetectedPulsePair again =
      simulate_detected_pair(bench, 50e-9, 1000e-9, omega_rf, det, vgrid);
  CHECK(again.v_on == pair.v_on);
  CHECK(again.v_off == pair.v_off);

  // A repetition period shorter than 5 / Gamma21 trips the relax warning.
  const DetectedPulsePair rushed =
      simulate_detected_pair(bench, 50e-9, 100e-9, omega_rf, det, vgrid);
  CHECK(rushed.relax_warning);

  CHECK_THROWS_AS(
      simulate_detected_pair(bench, 50e-9, 40e-9, omega_rf, det, vgrid),
      InvalidParameterError);
  CHECK_THROWS_AS(
      simulate_detected_pair(bench, 50e-9, 1000e-9, -1.0, det, vgrid),
      InvalidParameterError);
}

TEST_CASE("pulse response draws an independent noise pair per pulse") {
  OpticalBench bench;
  DetectorModel det;
  const VelocityGrid vgrid =
      build_velocity_grid(295.0, constants::rb85_mass, 3);

  PulseTrain train;
  train.pulse_width = 50e-9;
  train.rep_period = 1000e-9;
  train.n_pulses = 3;

  const PulseResponse resp = simulate_pulse_response(
      bench, train, kTwoPi * 17.11e6, det, vgrid, 77);
  REQUIRE(resp.v_on_j.size() == 3);
  REQUIRE(resp.v_off_j.size() == 3);

  const std::size_t n = resp.pair.v_on.size();
  // Pulse j's record is the deterministic trace plus the j-th noise stream.
  const auto nz00 = noise_trace(det, resp.pair.mean_current,
                                resp.pair.grid.dt, n, derive_seed(77, 0, 0));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(resp.v_on_j[0][i] ==
          Approx(resp.pair.v_on[i] + nz00[i]).margin(1e-18));
  }
  CHECK(resp.v_on_j[0] != resp.v_on_j[1]);
  CHECK(resp.v_on_j[1] != resp.v_on_j[2]);
  CHECK(resp.v_off_j[0] != resp.v_on_j[0]);

  const PulseResponse same = simulate_pulse_response(
      bench, train, kTwoPi * 17.11e6, det, vgrid, 77);
  CHECK(same.v_on_j[2] == resp.v_on_j[2]);
  const PulseResponse moved = simulate_pulse_response(
      bench, train, kTwoPi * 17.11e6, det, vgrid, 78);
  CHECK(moved.v_on_j[0] != resp.v_on_j[0]);
}
