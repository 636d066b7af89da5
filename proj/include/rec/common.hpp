// Copyright 2026 the recsettle authors
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

#ifndef RECSETTLE_COMMON_HPP_
#define RECSETTLE_COMMON_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rec {

// Base class for all errors raised by the library.  The category tag is a
// stable machine-readable slug ("input", "model", "solver", ...) used by the
// command line front end to build its "ERROR:<category>:" diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

// Malformed or inconsistent user input (files, flags, meter data).
class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error("input", message) {}
};

// A structurally invalid optimization model (bad bounds, NaN coefficients).
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& message) : Error("model", message) {}
};

// Numerical failure inside the simplex engine that survived refactorization.
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& message) : Error("solver", message) {}
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Rounds a monetary amount to four decimal places (hundredths of a cent)
// using round-half-to-even, the convention applied to every figure that
// leaves the engine as money.
inline double round_money(double amount) {
  return std::nearbyint(amount * 1e4) / 1e4;
}

// True when |a - b| is within an absolute-plus-relative band.  Used by the
// verification passes; tolerances are always passed explicitly at the call
// site so they remain visible next to the check they protect.
inline bool close(double a, double b, double abs_tol, double rel_tol = 0.0) {
  return std::abs(a - b) <= abs_tol + rel_tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace rec

#endif  // RECSETTLE_COMMON_HPP_
