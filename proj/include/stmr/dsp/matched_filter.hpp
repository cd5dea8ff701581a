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
#include <cstddef>
#include <vector>

#include "stmr/errors.hpp"

namespace stmr {

// Number of samples spanned by a rectangular template of width T on a grid
// of spacing dt.
inline std::size_t matched_filter_width(double dt, double pulse_width) {
  if (!(dt > 0.0) || !(pulse_width > 0.0)) {
    throw InvalidParameterError(
        "matched_filter_width: dt and pulse_width must be > 0");
  }
  const double w = std::round(pulse_width / dt);
  if (w < 1.0) {
    throw InvalidParameterError(
        "matched_filter_width: pulse narrower than one sample");
  }
  return static_cast<std::size_t>(w);
}

// Correlation with a unit-area rectangle of width T, full-overlap positions
// only: out[j] = mean(s[j .. j+W-1]), length n - W + 1. A constant input maps
// to the same constant.
inline std::vector<double> matched_filter(const std::vector<double>& s,
                                          double dt, double pulse_width) {
  const std::size_t w = matched_filter_width(dt, pulse_width);
  if (s.size() < w) {
    throw ShapeError("matched_filter: input shorter than the template");
  }
  std::vector<double> prefix(s.size() + 1, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) prefix[i + 1] = prefix[i] + s[i];
  std::vector<double> out(s.size() - w + 1);
  const double inv_w = 1.0 / static_cast<double>(w);
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = (prefix[j + w] - prefix[j]) * inv_w;
  }
  return out;
}

}  // namespace stmr
