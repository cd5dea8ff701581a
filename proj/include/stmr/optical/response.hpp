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

#include <complex>
#include <cstdint>
#include <vector>

#include "stmr/atomic/ladder.hpp"
#include "stmr/constants.hpp"
#include "stmr/errors.hpp"
#include "stmr/optical/vapor.hpp"

namespace stmr {

// Complex probe susceptibility series. Samples where the probe is off are
// marked undefined rather than evaluated.
struct ChiSeries {
  std::vector<std::complex<double>> chi;
  std::vector<std::uint8_t> defined;
};

// chi_p(t) = 2 N0 d21 rho21(t) / (eps0 E_p(t)). E_p below `field_floor`
// counts as probe-off and yields an undefined sample; evaluating a single
// point at E_p = 0 is a guarded division error.
inline std::complex<double> susceptibility_at(std::complex<double> rho21,
                                              double e_probe, double n0,
                                              double d21_si) {
  if (!(e_probe > 0.0)) {
    throw DivisionGuardError("susceptibility_at: probe field is zero");
  }
  return 2.0 * n0 * d21_si * rho21 / (constants::epsilon0 * e_probe);
}

inline ChiSeries susceptibility(
    const std::vector<std::complex<double>>& rho21,
    const std::vector<double>& e_probe, const LadderConfig& cfg,
    const VaporCellParams& cell, double field_floor = 0.0) {
  if (rho21.size() != e_probe.size()) {
    throw ShapeError("susceptibility: rho21 and E_p series sizes differ");
  }
  ChiSeries out;
  out.chi.resize(rho21.size());
  out.defined.resize(rho21.size());
  for (std::size_t i = 0; i < rho21.size(); ++i) {
    if (e_probe[i] > field_floor) {
      out.chi[i] = susceptibility_at(rho21[i], e_probe[i], cell.density_n0,
                                     cfg.d21_si());
      out.defined[i] = 1;
    } else {
      out.chi[i] = {0.0, 0.0};
      out.defined[i] = 0;
    }
  }
  return out;
}

struct TransmitResult {
  std::vector<double> p_out;  // W
  bool gain_warning = false;  // Im chi < -1e-6 somewhere
  double min_im_chi = 0.0;
};

// Beer-Lambert propagation: P_out = P_in exp(-alpha L) with
// alpha = (2 pi / lambda_p) Im chi. Undefined chi samples carry the input
// power through unchanged (no atoms driven, no absorption computed); where
// the probe is off P_in is zero anyway.
inline TransmitResult transmit(const std::vector<double>& p_in,
                               const ChiSeries& chi, double lambda_p,
                               double length) {
  if (p_in.size() != chi.chi.size()) {
    throw ShapeError("transmit: power and chi series sizes differ");
  }
  if (!(lambda_p > 0.0) || !(length > 0.0)) {
    throw InvalidParameterError("transmit: lambda_p and length must be > 0");
  }
  const double k = constants::two_pi / lambda_p;
  TransmitResult res;
  res.p_out.resize(p_in.size());
  for (std::size_t i = 0; i < p_in.size(); ++i) {
    if (!chi.defined[i]) {
      res.p_out[i] = p_in[i];
      continue;
    }
    const double im = chi.chi[i].imag();
    if (im < res.min_im_chi) res.min_im_chi = im;
    if (im < -1e-6) res.gain_warning = true;
    res.p_out[i] = p_in[i] * std::exp(-k * im * length);
  }
  return res;
}

}  // namespace stmr
