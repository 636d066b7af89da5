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
//
// Brute-force settlement reference for desk-scale instances: scans repartition
// keys on a grid and prices each point directly from the bill formula, with
// no linear algebra shared with the optimizing path.

#ifndef RECSETTLE_ORACLE_HPP_
#define RECSETTLE_ORACLE_HPP_

#include <cstdint>

#include "rec/contracts.hpp"
#include "rec/keygen.hpp"
#include "rec/metering.hpp"

namespace rec {

struct OracleResult {
  double objective = 0.0;     // EUR, bills plus deviation penalties
  KeyMatrix keys;             // best grid point found, T x I
  double lipschitz = 0.0;     // L: grid optimum - true optimum <= L * step
  std::int64_t evaluated = 0; // grid points priced
};

// Enumerates, independently per period, every key vector on the step grid
// (plus each member's bound and initial key) that satisfies the share and
// deviation constraints, assigns verified allocations v = min(a, Cn) and
// matches them greedily with local sales, and returns the cheapest point.
//
// Valid only in the price regime where that inner assignment is optimal:
// buy >= local-buy, local-sell >= sell, one common local-sell margin, and no
// self-supply floors; violations and oversized instances are refused.
OracleResult grid_search_settle(const MeterSeries& series, const ContractSet& contracts,
                                const KeyMatrix& initial_keys, double step = 0.01);

}  // namespace rec

#endif  // RECSETTLE_ORACLE_HPP_
