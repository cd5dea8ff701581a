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
#include <complex>
#include <vector>

#include "stmr/constants.hpp"
#include "stmr/errors.hpp"
#include "stmr/optical/doppler.hpp"
#include "stmr/optical/ensemble.hpp"
#include "stmr/optical/response.hpp"
#include "stmr/optical/spectrum.hpp"
#include "stmr/optical/vapor.hpp"

using namespace stmr;
using Catch::Approx;

namespace {

constexpr double kTwoPi = constants::two_pi;

// Thermal width sqrt(kB 295 / m85), checked against independent arithmetic.
constexpr double kThermalA = 169.958974964070;

LadderConfig doppler_config() {
  LadderConfig cfg;
  cfg.dephasing_gamma = {0.0, 0.0, 0.0};
  cfg.transit_rate = kTwoPi * 194e3;
  return cfg;
}

VelocityGrid single_class_grid() {
  VelocityGrid g;
  g.velocities = {0.0};
  g.weights = {1.0};
  return g;
}

}  // namespace

TEST_CASE("velocity grid is symmetric and carries the truncated mass") {
  const VelocityGrid g =
      build_velocity_grid(295.0, constants::rb85_mass, 101);
  REQUIRE(g.velocities.size() == 101);
  REQUIRE(g.weights.size() == 101);

  CHECK(g.velocities.front() == Approx(-4.0 * kThermalA).epsilon(1e-10));
  CHECK(g.velocities.back() == Approx(4.0 * kThermalA).epsilon(1e-10));
  CHECK(g.velocities[50] == 0.0);
  for (int k = 0; k < 101; ++k) {
    CHECK(g.velocities[k] == Approx(-g.velocities[100 - k]).margin(1e-9));
    CHECK(g.weights[k] == Approx(g.weights[100 - k]).epsilon(1e-12));
  }
  // Center class dominates; the halved trapezoid ends sit at exp(-8)/2.
  CHECK(g.weights[50] == *std::max_element(g.weights.begin(), g.weights.end()));
  CHECK(g.weights.front() / g.weights[50] ==
        Approx(0.5 * std::exp(-8.0)).epsilon(1e-12));

  CHECK(g.weight_sum() == Approx(0.9999366575163338).epsilon(1e-12));
}

TEST_CASE("velocity grid rejects degenerate shapes") {
  CHECK_THROWS_AS(build_velocity_grid(295.0, constants::rb85_mass, 2),
                  InvalidParameterError);
  CHECK_THROWS_AS(build_velocity_grid(295.0, constants::rb85_mass, 1),
                  InvalidParameterError);
  CHECK_THROWS_AS(build_velocity_grid(295.0, constants::rb85_mass, 100),
                  InvalidParameterError);
  CHECK_THROWS_AS(build_velocity_grid(0.0, constants::rb85_mass, 5),
                  InvalidParameterError);
  CHECK_THROWS_AS(build_velocity_grid(295.0, 0.0, 5), InvalidParameterError);
}

TEST_CASE("doppler shifts move probe and coupling detunings oppositely") {
  const Detunings base{kTwoPi * 1e6, kTwoPi * 2e6, kTwoPi * 3e6};
  const double v = 100.0;
  const Detunings d = doppler_detunings(base, v, 780.241e-9, 480e-9);

  // v / lambda at 100 m/s: 128.1655 MHz on the probe, 208.3333 MHz on the
  // counter-propagating coupling beam.
  CHECK((base.delta1 - d.delta1) / kTwoPi ==
        Approx(128165528.343166).epsilon(1e-12));
  CHECK((d.delta2 - base.delta2) / kTwoPi ==
        Approx(208333333.333333).epsilon(1e-12));
  CHECK(d.delta3 == base.delta3);

  const Detunings still = doppler_detunings(base, 0.0, 780.241e-9, 480e-9);
  CHECK(still.delta1 == base.delta1);
  CHECK(still.delta2 == base.delta2);

  CHECK_THROWS_AS(
      doppler_detunings(base, std::nan(""), 780.241e-9, 480e-9),
      InvalidParameterError);
}

TEST_CASE("doppler average weights classes and rejects ragged input") {
  VelocityGrid g;
  g.velocities = {-100.0, 0.0, 100.0};
  g.weights = {1.0, 2.0, 1.0};

  using Series = std::vector<std::complex<double>>;
  const Series flat(4, {0.5, -0.25});
  std::vector<Series> identical{flat, flat, flat};
  const Series avg = doppler_average_rho21(identical, g);
  REQUIRE(avg.size() == 4);
  for (const auto& z : avg) {
    CHECK(z.real() == Approx(0.5).epsilon(1e-14));
    CHECK(z.imag() == Approx(-0.25).epsilon(1e-14));
  }

  std::vector<Series> distinct{Series(2, {1.0, 0.0}), Series(2, {2.0, 0.0}),
                               Series(2, {3.0, 0.0})};
  const Series mix = doppler_average_rho21(distinct, g);
  CHECK(mix[0].real() == Approx((1.0 + 4.0 + 3.0) / 4.0).epsilon(1e-14));

  std::vector<Series> ragged{Series(2), Series(3), Series(2)};
  CHECK_THROWS_AS(doppler_average_rho21(ragged, g), ShapeError);
  std::vector<Series> short_list{Series(2), Series(2)};
  CHECK_THROWS_AS(doppler_average_rho21(short_list, g), ShapeError);
  VelocityGrid empty;
  CHECK_THROWS_AS(doppler_average_rho21({}, empty), ShapeError);
}

TEST_CASE("vapor density matches the pressure model") {
  // Frozen arithmetic from the vapor-pressure formula at 295 K.
  CHECK(rb_number_density(295.0) == Approx(9.222785898892e15).epsilon(1e-9));
  CHECK(rb_number_density(295.0) * constants::rb85_abundance ==
        Approx(6.656084583230e15).epsilon(1e-9));

  // Liquid branch above the melting point, and monotone growth.
  const double t_liq = 320.0;
  const double p_torr = std::pow(10.0, 2.881 + 4.312 - 4040.0 / t_liq);
  const double expect =
      p_torr * 133.322368 / (constants::k_boltzmann * t_liq);
  CHECK(rb_number_density(t_liq) == Approx(expect).epsilon(1e-12));
  CHECK(rb_number_density(310.0) > rb_number_density(295.0));
  CHECK(rb_number_density(330.0) > rb_number_density(310.0));

  CHECK_THROWS_AS(rb_number_density(0.0), InvalidParameterError);
  CHECK_THROWS_AS(rb_number_density(-10.0), InvalidParameterError);
}

TEST_CASE("room-temperature cell defaults are self-consistent") {
  const VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  CHECK(cell.temperature == 295.0);
  CHECK(cell.length == 0.075);
  CHECK(cell.isotope_fraction == constants::rb85_abundance);
  CHECK(cell.density_n0 ==
        Approx(rb_number_density(295.0) * constants::rb85_abundance));
  CHECK_NOTHROW(cell.validate());

  VaporCellParams bad = cell;
  bad.length = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
  bad = cell;
  bad.isotope_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
}

TEST_CASE("gaussian peak field reproduces the reference intensity") {
  // 4.7 uW in a 200 um waist.
  CHECK(gaussian_peak_field(4.7e-6, 200e-6) ==
        Approx(237.4046801027).epsilon(1e-10));
  // Field scales as sqrt(power).
  CHECK(gaussian_peak_field(4.0 * 4.7e-6, 200e-6) ==
        Approx(2.0 * 237.4046801027).epsilon(1e-12));
  CHECK(gaussian_peak_field(0.0, 200e-6) == 0.0);
  CHECK_THROWS_AS(gaussian_peak_field(1e-6, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(gaussian_peak_field(-1e-6, 1e-4), InvalidParameterError);
}

TEST_CASE("susceptibility follows the linear-response formula") {
  LadderConfig cfg;
  const VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  const std::complex<double> r21{1e-4, 2e-4};
  const double e_probe = 237.4;

  const std::complex<double> chi =
      susceptibility_at(r21, e_probe, cell.density_n0, cfg.d21_si());
  const double scale =
      2.0 * cell.density_n0 * cfg.d21_si() / (constants::epsilon0 * e_probe);
  CHECK(chi.real() == Approx(scale * 1e-4).epsilon(1e-14));
  CHECK(chi.imag() == Approx(scale * 2e-4).epsilon(1e-14));

  // Doubling rho21 doubles chi; doubling the field halves it.
  const auto chi2 =
      susceptibility_at(2.0 * r21, e_probe, cell.density_n0, cfg.d21_si());
  CHECK(chi2.imag() == Approx(2.0 * chi.imag()).epsilon(1e-14));
  const auto chih =
      susceptibility_at(r21, 2.0 * e_probe, cell.density_n0, cfg.d21_si());
  CHECK(chih.imag() == Approx(0.5 * chi.imag()).epsilon(1e-14));

  CHECK_THROWS_AS(susceptibility_at(r21, 0.0, cell.density_n0, cfg.d21_si()),
                  DivisionGuardError);
}

TEST_CASE("susceptibility series marks probe-off samples undefined") {
  LadderConfig cfg;
  const VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  const std::vector<std::complex<double>> r21{
      {1e-4, 1e-4}, {1e-4, 1e-4}, {1e-4, 1e-4}};
  const std::vector<double> e_probe{200.0, 0.0, 1e-9};

  const ChiSeries s = susceptibility(r21, e_probe, cfg, cell, 1e-6);
  REQUIRE(s.chi.size() == 3);
  CHECK(s.defined[0] == 1);
  CHECK(s.defined[1] == 0);
  CHECK(s.defined[2] == 0);
  CHECK(s.chi[1] == std::complex<double>(0.0, 0.0));

  CHECK_THROWS_AS(
      susceptibility(r21, std::vector<double>{1.0, 2.0}, cfg, cell),
      ShapeError);
}

TEST_CASE("transmission follows Beer-Lambert and flags optical gain") {
  const double lambda = 780.241e-9;
  const double length = 0.075;
  const double k = kTwoPi / lambda;

  ChiSeries chi;
  chi.chi = {{0.0, 2e-7}, {0.0, 0.0}, {0.0, -5e-6}};
  chi.defined = {1, 0, 1};
  const std::vector<double> p_in{1e-6, 2e-6, 3e-6};

  const TransmitResult res = transmit(p_in, chi, lambda, length);
  CHECK(res.p_out[0] ==
        Approx(1e-6 * std::exp(-k * 2e-7 * length)).epsilon(1e-14));
  CHECK(res.p_out[1] == 2e-6);  // undefined sample: pass-through
  CHECK(res.p_out[2] ==
        Approx(3e-6 * std::exp(k * 5e-6 * length)).epsilon(1e-14));
  CHECK(res.gain_warning);
  CHECK(res.min_im_chi == Approx(-5e-6));

  ChiSeries benign;
  benign.chi = {{0.0, 1e-7}};
  benign.defined = {1};
  const TransmitResult ok = transmit({1e-6}, benign, lambda, length);
  CHECK_FALSE(ok.gain_warning);

  CHECK_THROWS_AS(transmit({1.0, 2.0}, benign, lambda, length), ShapeError);
  CHECK_THROWS_AS(transmit({1e-6}, benign, 0.0, length),
                  InvalidParameterError);
  CHECK_THROWS_AS(transmit({1e-6}, benign, lambda, -1.0),
                  InvalidParameterError);
}

TEST_CASE("ensemble steady state matches an exact linear-algebra reference") {
  // Frozen linear-solver reference: 5-class grid at 295 K, resonant drives
  // omega_p/c/rf = 2 pi {2.14, 11.1, 17.11} MHz, transit 2 pi 194 kHz.
  LadderConfig cfg = doppler_config();
  const Detunings base{};
  const DriveValues dv{kTwoPi * 2.14e6, kTwoPi * 11.1e6, kTwoPi * 17.11e6};
  const VelocityGrid grid =
      build_velocity_grid(295.0, constants::rb85_mass, 5);

  SteadyOptions sopts;
  sopts.flatness_tol = 1e-7;
  const std::complex<double> avg =
      ensemble_rho21_steady(cfg, base, dv, grid, 1, 1.0, sopts);
  CHECK(avg.imag() == Approx(1.877673118669e-1).epsilon(2e-4));
  CHECK(std::abs(avg.real()) < 1e-6);
}

TEST_CASE("ensemble trace on a single-class grid equals the class trace") {
  LadderConfig cfg = doppler_config();
  const Detunings base{0.0, kTwoPi * 2e6, 0.0};
  const DriveSet drives{DriveChannel::constant(kTwoPi * 2.14e6),
                        DriveChannel::constant(kTwoPi * 11.1e6),
                        DriveChannel::constant(0.0)};
  TraceGrid tgrid;
  tgrid.dt = 2e-9;
  tgrid.n = 100;

  const VelocityGrid vg = single_class_grid();
  const auto ens = ensemble_rho21(cfg, base, drives, tgrid, vg, 1, 1.0);
  const auto solo =
      simulate_class_rho21(cfg, base, 0.0, drives, tgrid, 1.0);
  REQUIRE(ens.size() == solo.size());
  REQUIRE(ens.size() == static_cast<std::size_t>(tgrid.n + 1));
  for (std::size_t i = 0; i < ens.size(); ++i) {
    CHECK(ens[i].real() == Approx(solo[i].real()).margin(1e-15));
    CHECK(ens[i].imag() == Approx(solo[i].imag()).margin(1e-15));
  }
}

TEST_CASE("eit spectrum reproduces an exact reference curve") {
  // Frozen linear-solver reference: 3-class grid, 7 coupling detunings over
  // +-30 MHz, RF on. Compared through the optical depth -ln T.
  LadderConfig cfg = doppler_config();
  const VaporCellParams cell = VaporCellParams::room_temperature_rb85();
  const DriveValues amps{kTwoPi * 2.14e6, kTwoPi * 11.1e6, kTwoPi * 17.11e6};
  const double probe_field = gaussian_peak_field(4.7e-6, 200e-6);
  const VelocityGrid grid =
      build_velocity_grid(295.0, constants::rb85_mass, 3);

  std::vector<double> sweep(7);
  for (int i = 0; i < 7; ++i) sweep[i] = kTwoPi * (-30e6 + 10e6 * i);

  SteadyOptions sopts;
  sopts.flatness_tol = 1e-7;
  const SpectrumResult spec = eit_spectrum(cfg, cell, amps, probe_field,
                                           sweep, true, Detunings{}, grid,
                                           1, 1.0, sopts);
  REQUIRE(spec.transmission.size() == 7);

  const double expect[7] = {0.0000002426, 0.0000025675, 0.0795091896,
                            0.0000003276, 0.0795091896, 0.0000025675,
                            0.0000002426};
  for (int i = 0; i < 7; ++i) {
    CAPTURE(i);
    CHECK(-std::log(spec.transmission[i]) ==
          Approx(-std::log(expect[i])).epsilon(5e-3));
  }
  // Symmetric detunings over a symmetric grid give a symmetric curve.
  for (int i = 0; i < 3; ++i) {
    CHECK(spec.transmission[i] ==
          Approx(spec.transmission[6 - i]).epsilon(1e-6));
  }

  CHECK_THROWS_AS(eit_spectrum(cfg, cell, amps, probe_field, {}, true,
                               Detunings{}, grid),
                  InvalidParameterError);
}

TEST_CASE("peak separation estimator recovers a synthetic doublet") {
  SpectrumResult spec;
  const double sep = kTwoPi * 17.11e6;
  for (int i = 0; i < 201; ++i) {
    const double x = kTwoPi * (-40e6 + 0.4e6 * i);
    spec.delta2.push_back(x);
    const double w = kTwoPi * 4e6;
    const double lobe_a = std::exp(-std::pow((x - sep / 2) / w, 2));
    const double lobe_b = 0.92 * std::exp(-std::pow((x + sep / 2) / w, 2));
    spec.transmission.push_back(0.02 + lobe_a + lobe_b);
  }
  CHECK(estimate_peak_separation(spec) == Approx(sep).epsilon(5e-3));

  SpectrumResult mono;
  for (int i = 0; i < 51; ++i) {
    const double x = kTwoPi * (-10e6 + 0.4e6 * i);
    mono.delta2.push_back(x);
    mono.transmission.push_back(std::exp(-std::pow(x / (kTwoPi * 3e6), 2)));
  }
  CHECK_THROWS_AS(estimate_peak_separation(mono), Error);

  SpectrumResult tiny;
  tiny.delta2 = {0.0, 1.0};
  tiny.transmission = {0.1, 0.2};
  CHECK_THROWS_AS(estimate_peak_separation(tiny), Error);
}
