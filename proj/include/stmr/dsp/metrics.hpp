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
#include <cstdint>
#include <vector>

#include "stmr/dsp/matched_filter.hpp"
#include "stmr/errors.hpp"
#include "stmr/receiver/detector.hpp"
#include "stmr/util/rng.hpp"

namespace stmr {

inline double max_element_value(const std::vector<double>& x) {
  if (x.empty()) throw ShapeError("max_element_value: empty series");
  return *std::max_element(x.begin(), x.end());
}

// S_j: peak of the matched-filtered (on - off) voltage difference.
inline double signal_metric(const std::vector<double>& v_on,
                            const std::vector<double>& v_off, double dt,
                            double pulse_width) {
  if (v_on.size() != v_off.size()) {
    throw ShapeError("signal_metric: trace sizes differ");
  }
  std::vector<double> diff(v_on.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = v_on[i] - v_off[i];
  return max_element_value(matched_filter(diff, dt, pulse_width));
}

// N_j: same statistic applied to a pair of signal-free noise traces.
inline double noise_metric(const std::vector<double>& noise_a,
                           const std::vector<double>& noise_b, double dt,
                           double pulse_width) {
  return signal_metric(noise_a, noise_b, dt, pulse_width);
}

// Alternative single-trace reading of N_j.
inline double noise_metric_single(const std::vector<double>& noise, double dt,
                                  double pulse_width) {
  return max_element_value(matched_filter(noise, dt, pulse_width));
}

enum class NoiseMetricMode { kPair, kSingle };

// SNR = <S_j>^2 / <N_j^2> over repeated noise draws.
inline double snr_from_records(const std::vector<double>& s_j,
                               const std::vector<double>& n_j,
                               int min_reps = 30) {
  if (s_j.size() != n_j.size()) {
    throw ShapeError("snr_from_records: S and N record counts differ");
  }
  if (static_cast<int>(s_j.size()) < min_reps) {
    throw InvalidParameterError(
        "snr_from_records: fewer repetitions than required");
  }
  double s_mean = 0.0;
  double n_sq = 0.0;
  for (double s : s_j) s_mean += s;
  for (double n : n_j) n_sq += n * n;
  s_mean /= static_cast<double>(s_j.size());
  n_sq /= static_cast<double>(n_j.size());
  if (!(n_sq > 0.0)) {
    throw DivisionGuardError("snr_from_records: zero noise power");
  }
  return s_mean * s_mean / n_sq;
}

// OOK bit error rate for threshold detection at half the signal level,
// BER = erfc(sqrt(SNR) / (2 sqrt 2)) / 2, floored at 1e-30.
inline double ber_from_snr(double snr) {
  if (!(snr >= 0.0)) {
    throw InvalidParameterError("ber_from_snr: SNR must be >= 0");
  }
  const double ber = 0.5 * std::erfc(std::sqrt(snr) / (2.0 * std::sqrt(2.0)));
  return std::max(ber, 1e-30);
}

// Detection outcome for one operating point.
struct DetectionRecord {
  double pulse_width = 0.0;  // s
  int n_reps = 0;
  std::vector<double> s_j;
  std::vector<double> n_j;
  double snr = 0.0;
  double ber = 0.5;
};

// Repeats the pulse measurement `reps` times with fresh noise: the signal
// estimate uses noisy on/off traces, the noise estimate a pair of blank
// traces at the same operating point. Four independent noise draws per rep.
inline DetectionRecord measure_detection(
    const std::vector<double>& v_on, const std::vector<double>& v_off,
    double dt, double pulse_width, const DetectorModel& det,
    double mean_current, int reps, uint64_t seed, int min_reps = 30,
    NoiseMetricMode mode = NoiseMetricMode::kPair) {
  if (v_on.size() != v_off.size()) {
    throw ShapeError("measure_detection: trace sizes differ");
  }
  if (reps < min_reps) {
    throw InvalidParameterError(
        "measure_detection: fewer repetitions than required");
  }
  const std::size_t n = v_on.size();
  DetectionRecord rec;
  rec.pulse_width = pulse_width;
  rec.n_reps = reps;
  rec.s_j.resize(reps);
  rec.n_j.resize(reps);
  std::vector<double> on(n), off(n);
  for (int j = 0; j < reps; ++j) {
    const uint64_t jj = static_cast<uint64_t>(j);
    const auto nz_on = noise_trace(det, mean_current, dt, n,
                                   derive_seed(seed, 0, jj));
    const auto nz_off = noise_trace(det, mean_current, dt, n,
                                    derive_seed(seed, 1, jj));
    for (std::size_t i = 0; i < n; ++i) {
      on[i] = v_on[i] + nz_on[i];
      off[i] = v_off[i] + nz_off[i];
    }
    rec.s_j[j] = signal_metric(on, off, dt, pulse_width);
    const auto nz_a = noise_trace(det, mean_current, dt, n,
                                  derive_seed(seed, 2, jj));
    if (mode == NoiseMetricMode::kPair) {
      const auto nz_b = noise_trace(det, mean_current, dt, n,
                                    derive_seed(seed, 3, jj));
      rec.n_j[j] = noise_metric(nz_a, nz_b, dt, pulse_width);
    } else {
      rec.n_j[j] = noise_metric_single(nz_a, dt, pulse_width);
    }
  }
  rec.snr = snr_from_records(rec.s_j, rec.n_j, min_reps);
  rec.ber = ber_from_snr(rec.snr);
  return rec;
}

}  // namespace stmr
