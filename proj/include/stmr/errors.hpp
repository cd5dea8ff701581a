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

#include <stdexcept>
#include <string>

namespace stmr {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A parameter is out of its physical or numerical domain.
class InvalidParameterError : public Error {
 public:
  explicit InvalidParameterError(const std::string& msg) : Error(msg) {}
};

// Requested integration step exceeds the stability ceiling.
class StepSizeError : public Error {
 public:
  explicit StepSizeError(const std::string& msg) : Error(msg) {}
};

// A density-matrix invariant (trace, Hermiticity, positivity) broke mid-run.
class NumericalInstabilityError : public Error {
 public:
  NumericalInstabilityError(const std::string& msg, long step)
      : Error(msg + " at step " + std::to_string(step)), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

// Series lengths or time grids do not line up.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Division guard tripped (zero field, zero noise power, ...).
class DivisionGuardError : public Error {
 public:
  explicit DivisionGuardError(const std::string& msg) : Error(msg) {}
};

// Steady-state iteration did not flatten within the allowed window.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : Error(msg + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Invalid spatiotemporal schedule (non-integer beam count, overlapping pulses).
class ScheduleError : public Error {
 public:
  explicit ScheduleError(const std::string& msg) : Error(msg) {}
};

// Config file could not be parsed.
class ConfigParseError : public Error {
 public:
  ConfigParseError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Config parsed but failed validation; message lists every violation.
class ConfigValidationError : public Error {
 public:
  explicit ConfigValidationError(const std::string& msg) : Error(msg) {}
};

// Filesystem failure while reading or writing results.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace stmr
