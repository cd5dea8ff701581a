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

#include "stmr/atomic/density.hpp"
#include "stmr/atomic/drives.hpp"
#include "stmr/atomic/ladder.hpp"
#include "stmr/errors.hpp"

namespace stmr {

// H/hbar (rad/s) in the rotating frame. Diagonal (0, Delta1, delta, Dbar)
// with delta = Delta1+Delta2 and Dbar = Delta1+Delta2-Delta3; couplings
// -Omega/2 on the three ladder links.
inline Eigen::Matrix4cd build_hamiltonian(const Detunings& d,
                                          const DriveValues& drives) {
  d.validate();
  if (!std::isfinite(drives.omega_p) || !std::isfinite(drives.omega_c) ||
      !std::isfinite(drives.omega_rf)) {
    throw InvalidParameterError("build_hamiltonian: non-finite Rabi value");
  }
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  h(1, 1) = d.delta1;
  h(2, 2) = d.two_photon();
  h(3, 3) = d.three_photon();
  h(1, 0) = h(0, 1) = -0.5 * drives.omega_p;
  h(2, 1) = h(1, 2) = -0.5 * drives.omega_c;
  h(3, 2) = h(2, 3) = -0.5 * drives.omega_rf;
  return h;
}

// Spontaneous-emission and pure-dephasing dissipator,
// L(rho) = 1/2 sum_{i>j} Gamma_ij (2 s_ji rho s_ij - s_ii rho - rho s_ii)
//        + 1/2 sum_{i>1} gamma_i (2 s_ii rho s_ii - s_ii rho - rho s_ii),
// with decay channels 2->1, 3->2, 4->3.
inline Eigen::Matrix4cd lindblad_dissipator(const DensityMatrix& rho,
                                            const LadderConfig& cfg) {
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  const struct {
    int from, to;
    double rate;
  } channels[] = {{1, 0, cfg.gamma_21}, {2, 1, cfg.gamma_32},
                  {3, 2, cfg.gamma_43}};
  for (const auto& ch : channels) {
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    a(ch.to, ch.from) = 1.0;
    const Eigen::Matrix4cd ada = a.adjoint() * a;
    out += ch.rate * (a * rho * a.adjoint() -
                      0.5 * (ada * rho + rho * ada));
  }
  for (int lvl = 1; lvl < 4; ++lvl) {
    const double g = cfg.dephasing_gamma[lvl - 1];
    if (g == 0.0) continue;
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    s(lvl, lvl) = 1.0;
    out += 0.5 * g * (2.0 * s * rho * s - s * rho - rho * s);
  }
  return out;
}

// Phenomenological transit term: relaxation toward |1><1| at rate gamma_t.
// Excited populations and all coherences decay at gamma_t; the lost
// population refills the ground state, so the trace is conserved.
inline Eigen::Matrix4cd transit_dephasing(const DensityMatrix& rho,
                                          const LadderConfig& cfg) {
  Eigen::Matrix4cd out = -cfg.transit_rate * rho;
  out(0, 0) += cfg.transit_rate * rho.trace();
  return out;
}

// Full right-hand side: -i [H/hbar, rho] + L(rho) + L_t(rho). Reference
// implementation; the integrator uses the unrolled LadderRhs below, which is
// tested against this one.
inline Eigen::Matrix4cd master_rhs(const DensityMatrix& rho,
                                   const Detunings& d,
                                   const DriveValues& drives,
                                   const LadderConfig& cfg) {
  const Eigen::Matrix4cd h = build_hamiltonian(d, drives);
  const std::complex<double> minus_i{0.0, -1.0};
  return minus_i * (h * rho - rho * h) + lindblad_dissipator(rho, cfg) +
         transit_dephasing(rho, cfg);
}

// Unrolled RHS over the packed Hermitian representation. Detunings and decay
// rates are frozen at construction; the three Rabi values vary per call.
class LadderRhs {
 public:
  LadderRhs(const LadderConfig& cfg, const Detunings& det)
      : g21_(cfg.gamma_21),
        g32_(cfg.gamma_32),
        g43_(cfg.gamma_43),
        gt_(cfg.transit_rate) {
    d_[0] = 0.0;
    d_[1] = det.delta1;
    d_[2] = det.two_photon();
    d_[3] = det.three_photon();
    const double gout[4] = {0.0, cfg.gamma_21, cfg.gamma_32, cfg.gamma_43};
    const double gdep[4] = {0.0, cfg.dephasing_gamma[0],
                            cfg.dephasing_gamma[1], cfg.dephasing_gamma[2]};
    int k = 0;
    for (int u = 1; u < 4; ++u) {
      for (int v = 0; v < u; ++v) {
        damp_[k++] = 0.5 * (gout[u] + gout[v] + gdep[u] + gdep[v]) + gt_;
      }
    }
  }

  // out may not alias s.
  void operator()(const double* s, double om_p, double om_c, double om_rf,
                  double* out) const noexcept {
    const double p = -0.5 * om_p;
    const double q = -0.5 * om_c;
    const double r = -0.5 * om_rf;

    const double n0 = s[0], n1 = s[1], n2 = s[2], n3 = s[3];
    const double c10r = s[4], c10i = s[5];
    const double c20r = s[6], c20i = s[7];
    const double c21r = s[8], c21i = s[9];
    const double c30r = s[10], c30i = s[11];
    const double c31r = s[12], c31i = s[13];
    const double c32r = s[14], c32i = s[15];

    const double tr = n0 + n1 + n2 + n3;

    // Populations: coherent exchange plus decay cascade plus transit refill.
    out[0] = 2.0 * p * c10i + g21_ * n1 + gt_ * (tr - n0);
    out[1] = -2.0 * p * c10i + 2.0 * q * c21i + g32_ * n2 - (g21_ + gt_) * n1;
    out[2] = -2.0 * q * c21i + 2.0 * r * c32i + g43_ * n3 - (g32_ + gt_) * n2;
    out[3] = -2.0 * r * c32i - (g43_ + gt_) * n3;

    // Coherences: -i[(d_u - d_v) c + (V rho)_uv - (rho V)_uv] - damp * c.
    // -i*(a+ib) = b - ia, applied term by term below.
    {
      const double w = d_[1] - d_[0];
      const double re = w * c10r + p * n0 + q * c20r - p * n1;
      const double im = w * c10i + q * c20i;
      out[4] = im - damp_[0] * c10r;
      out[5] = -re - damp_[0] * c10i;
    }
    {
      const double w = d_[2] - d_[0];
      const double re = w * c20r + q * c10r + r * c30r - p * c21r;
      const double im = w * c20i + q * c10i + r * c30i - p * c21i;
      out[6] = im - damp_[1] * c20r;
      out[7] = -re - damp_[1] * c20i;
    }
    {
      const double w = d_[2] - d_[1];
      const double re = w * c21r + q * n1 + r * c31r - p * c20r - q * n2;
      const double im = w * c21i + r * c31i - p * c20i;
      out[8] = im - damp_[2] * c21r;
      out[9] = -re - damp_[2] * c21i;
    }
    {
      const double w = d_[3] - d_[0];
      const double re = w * c30r + r * c20r - p * c31r;
      const double im = w * c30i + r * c20i - p * c31i;
      out[10] = im - damp_[3] * c30r;
      out[11] = -re - damp_[3] * c30i;
    }
    {
      const double w = d_[3] - d_[1];
      const double re = w * c31r + r * c21r - p * c30r - q * c32r;
      const double im = w * c31i + r * c21i - p * c30i - q * c32i;
      out[12] = im - damp_[4] * c31r;
      out[13] = -re - damp_[4] * c31i;
    }
    {
      const double w = d_[3] - d_[2];
      const double re = w * c32r + r * n2 - q * c31r - r * n3;
      const double im = w * c32i - q * c31i;
      out[14] = im - damp_[5] * c32r;
      out[15] = -re - damp_[5] * c32i;
    }
  }

 private:
  double d_[4];
  double damp_[6];  // order: (1,0) (2,0) (2,1) (3,0) (3,1) (3,2)
  double g21_, g32_, g43_, gt_;
};

}  // namespace stmr
