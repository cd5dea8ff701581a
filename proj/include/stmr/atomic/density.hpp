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

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>

namespace stmr {

// 4x4 complex density matrix; populations on the diagonal, coherences off it.
using DensityMatrix = Eigen::Matrix4cd;

inline DensityMatrix ground_state() {
  DensityMatrix rho = DensityMatrix::Zero();
  rho(0, 0) = 1.0;
  return rho;
}

inline double trace_real(const DensityMatrix& rho) {
  return rho.trace().real();
}

// max |rho - rho^dagger| entry.
inline double hermiticity_defect(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho,
                                                  Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Hermitian 4x4 state packed as 16 doubles: 4 real populations followed by
// the 6 lower-triangle coherences (re, im). The integrator works on this
// representation, which keeps Hermiticity exact by construction.
struct PackedRho {
  // Layout: [n0 n1 n2 n3, Re c10 Im c10, Re c20 Im c20, Re c21 Im c21,
  //          Re c30 Im c30, Re c31 Im c31, Re c32 Im c32]
  double x[16];

  static PackedRho pack(const DensityMatrix& rho) {
    PackedRho p{};
    for (int u = 0; u < 4; ++u) p.x[u] = rho(u, u).real();
    int k = 4;
    for (int u = 1; u < 4; ++u) {
      for (int v = 0; v < u; ++v) {
        p.x[k++] = rho(u, v).real();
        p.x[k++] = rho(u, v).imag();
      }
    }
    return p;
  }

  DensityMatrix unpack() const {
    DensityMatrix rho;
    for (int u = 0; u < 4; ++u) rho(u, u) = x[u];
    int k = 4;
    for (int u = 1; u < 4; ++u) {
      for (int v = 0; v < u; ++v) {
        const std::complex<double> c{x[k], x[k + 1]};
        k += 2;
        rho(u, v) = c;
        rho(v, u) = std::conj(c);
      }
    }
    return rho;
  }

  double trace() const { return x[0] + x[1] + x[2] + x[3]; }

  std::complex<double> rho21() const { return {x[4], x[5]}; }

  // Cheap positivity lower bound: min over rows of rho_uu - sum |rho_uv|.
  // Always <= the true smallest eigenvalue.
  double gershgorin_lower_bound() const {
    const double a10 = std::hypot(x[4], x[5]);
    const double a20 = std::hypot(x[6], x[7]);
    const double a21 = std::hypot(x[8], x[9]);
    const double a30 = std::hypot(x[10], x[11]);
    const double a31 = std::hypot(x[12], x[13]);
    const double a32 = std::hypot(x[14], x[15]);
    const double r0 = x[0] - (a10 + a20 + a30);
    const double r1 = x[1] - (a10 + a21 + a31);
    const double r2 = x[2] - (a20 + a21 + a32);
    const double r3 = x[3] - (a30 + a31 + a32);
    return std::min(std::min(r0, r1), std::min(r2, r3));
  }
};

}  // namespace stmr
