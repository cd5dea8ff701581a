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
#include <utility>
#include <vector>

#include "stmr/errors.hpp"

namespace stmr {

// One real, non-negative Rabi-frequency envelope (rad/s). Envelopes are
// piecewise constant over integration steps: the integrator samples them at
// the left endpoint of each step and holds that value through the substages.
class DriveChannel {
 public:
  DriveChannel() = default;

  static DriveChannel constant(double rabi) {
    DriveChannel ch;
    ch.kind_ = Kind::kConstant;
    ch.level_ = rabi;
    ch.check(rabi);
    return ch;
  }

  // Square pulse: `rabi` on [t_on, t_off), zero elsewhere, with optional
  // linear rise/fall ramps of the given durations inside the window.
  static DriveChannel pulse(double rabi, double t_on, double t_off,
                            double rise = 0.0, double fall = 0.0) {
    if (!(t_off > t_on)) {
      throw InvalidParameterError("DriveChannel::pulse: t_off must be > t_on");
    }
    if (rise < 0.0 || fall < 0.0 || rise + fall > t_off - t_on) {
      throw InvalidParameterError(
          "DriveChannel::pulse: ramps must be >= 0 and fit inside the pulse");
    }
    DriveChannel ch;
    ch.kind_ = Kind::kPulse;
    ch.level_ = rabi;
    ch.t_on_ = t_on;
    ch.t_off_ = t_off;
    ch.rise_ = rise;
    ch.fall_ = fall;
    ch.check(rabi);
    return ch;
  }

  // Sampled envelope: value[k] holds on [t0 + k dt, t0 + (k+1) dt); the last
  // sample extends to +infinity, and the first extends back to -infinity.
  static DriveChannel samples(std::vector<double> values, double dt,
                              double t0 = 0.0) {
    if (values.empty()) {
      throw InvalidParameterError("DriveChannel::samples: empty sample list");
    }
    if (!(dt > 0.0)) {
      throw InvalidParameterError("DriveChannel::samples: dt must be > 0");
    }
    DriveChannel ch;
    ch.kind_ = Kind::kSamples;
    ch.values_ = std::move(values);
    ch.dt_ = dt;
    ch.t0_ = t0;
    for (double v : ch.values_) ch.check(v);
    return ch;
  }

  double at(double t) const {
    switch (kind_) {
      case Kind::kConstant:
        return level_;
      case Kind::kPulse: {
        if (t < t_on_ || t >= t_off_) return 0.0;
        if (rise_ > 0.0 && t < t_on_ + rise_) {
          return level_ * (t - t_on_) / rise_;
        }
        if (fall_ > 0.0 && t >= t_off_ - fall_) {
          return level_ * (t_off_ - t) / fall_;
        }
        return level_;
      }
      case Kind::kSamples: {
        const double x = (t - t0_) / dt_;
        if (x <= 0.0) return values_.front();
        const auto k = static_cast<std::size_t>(x);
        return values_[std::min(k, values_.size() - 1)];
      }
    }
    return 0.0;
  }

  double peak() const {
    if (kind_ == Kind::kSamples) {
      return *std::max_element(values_.begin(), values_.end());
    }
    return level_;
  }

 private:
  enum class Kind { kConstant, kPulse, kSamples };

  static void check(double v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidParameterError(
          "DriveChannel: Rabi envelope must be finite and >= 0");
    }
  }

  Kind kind_ = Kind::kConstant;
  double level_ = 0.0;
  double t_on_ = 0.0;
  double t_off_ = 0.0;
  double rise_ = 0.0;
  double fall_ = 0.0;
  std::vector<double> values_;
  double dt_ = 0.0;
  double t0_ = 0.0;
};

// Instantaneous Rabi values (rad/s).
struct DriveValues {
  double omega_p = 0.0;
  double omega_c = 0.0;
  double omega_rf = 0.0;
};

// The three drive envelopes of the ladder.
struct DriveSet {
  DriveChannel probe;
  DriveChannel coupling;
  DriveChannel rf;

  DriveValues at(double t) const {
    return {probe.at(t), coupling.at(t), rf.at(t)};
  }

  DriveValues peak() const {
    return {probe.peak(), coupling.peak(), rf.peak()};
  }
};

}  // namespace stmr
