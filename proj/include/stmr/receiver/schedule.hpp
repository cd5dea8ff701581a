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

#include "stmr/errors.hpp"

namespace stmr {

// Periodic probe pulse train of one beam.
struct PulseTrain {
  double pulse_width = 10e-9;   // T (s)
  double rep_period = 500e-9;   // 1/f_r (s)
  double amplitude = 0.0;       // peak probe Rabi (rad/s)
  int n_pulses = 1;
  double start_offset = 0.0;    // delay of the first pulse (s)

  void validate() const {
    if (!(pulse_width > 0.0)) {
      throw InvalidParameterError("PulseTrain: pulse_width must be > 0");
    }
    if (!(pulse_width < rep_period)) {
      throw InvalidParameterError(
          "PulseTrain: pulse_width must be < repetition period (duty < 1)");
    }
    if (n_pulses < 1) {
      throw InvalidParameterError("PulseTrain: n_pulses must be >= 1");
    }
    if (!(amplitude >= 0.0) || !(start_offset >= 0.0)) {
      throw InvalidParameterError(
          "PulseTrain: amplitude and start_offset must be >= 0");
    }
  }
};

// N spatially separate beams, beam k delayed by k*T, sampling the RF field
// at f_s = N * f_r.
struct StmSchedule {
  int n_beams = 0;
  double f_s = 0.0;
  double f_r = 0.0;
  double pulse_width = 0.0;
  std::vector<PulseTrain> beams;

  double coverage_fraction() const {
    return static_cast<double>(n_beams) * pulse_width * f_r;
  }

  bool full_coverage() const {
    return std::abs(coverage_fraction() - 1.0) < 1e-9;
  }

  // Number of beams whose pulse window contains time t (mod the repetition
  // period). Exactly one everywhere iff the schedule tiles time.
  int coverage_count(double t) const {
    const double period = 1.0 / f_r;
    int count = 0;
    for (const auto& b : beams) {
      double local = std::fmod(t - b.start_offset, period);
      if (local < 0.0) local += period;
      if (local < b.pulse_width) ++count;
    }
    return count;
  }
};

inline StmSchedule make_stm_schedule(double f_s, double f_r, double t_pulse,
                                     double amplitude = 0.0,
                                     int n_pulses = 1) {
  if (!(f_s > 0.0) || !(f_r > 0.0) || !(t_pulse > 0.0)) {
    throw InvalidParameterError(
        "make_stm_schedule: f_s, f_r and T must be > 0");
  }
  const double ratio = f_s / f_r;
  const double n_round = std::round(ratio);
  if (n_round < 1.0 || std::abs(ratio - n_round) > 1e-9 * ratio) {
    throw ScheduleError("make_stm_schedule: f_s / f_r = " +
                        std::to_string(ratio) + " is not an integer");
  }
  if (t_pulse > 1.0 / f_s * (1.0 + 1e-12)) {
    throw ScheduleError(
        "make_stm_schedule: pulse width exceeds the sampling period "
        "(adjacent beams would overlap)");
  }
  StmSchedule sched;
  sched.n_beams = static_cast<int>(n_round);
  sched.f_s = f_s;
  sched.f_r = f_r;
  sched.pulse_width = t_pulse;
  sched.beams.resize(sched.n_beams);
  for (int k = 0; k < sched.n_beams; ++k) {
    auto& b = sched.beams[k];
    b.pulse_width = t_pulse;
    b.rep_period = 1.0 / f_r;
    b.amplitude = amplitude;
    b.n_pulses = n_pulses;
    b.start_offset = static_cast<double>(k) * t_pulse;
    b.validate();
  }
  return sched;
}

}  // namespace stmr
