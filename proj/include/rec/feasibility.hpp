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
// Parametric feasibility search: the largest uniform self-supply floor the
// community can honor.

#ifndef RECSETTLE_FEASIBILITY_HPP_
#define RECSETTLE_FEASIBILITY_HPP_

#include <Eigen/Core>

#include "rec/contracts.hpp"
#include "rec/keygen.hpp"
#include "rec/metering.hpp"

namespace rec {

struct FeasibilityResult {
  double max_floor = 0.0;  // s*: feasible at s*, infeasible at s* + tolerance
  int probes = 0;          // linear programs solved during the search
  Eigen::VectorXd ssr;     // per-member self-supply rates at the floor s*
};

// Bisects on [0, 1] for the largest uniform floor s* that keeps the
// settlement feasible (a floor of zero always is; feasibility is monotone
// in the floor because it only tightens lower bounds).  One model is built
// and reused across probes — they differ only in the floor bounds — and
// every probe warm-starts from the previous basis.
FeasibilityResult max_uniform_ssr(const MeterSeries& series, const ContractSet& contracts,
                                  const KeyMatrix& initial_keys, double tolerance = 1e-4);

}  // namespace rec

#endif  // RECSETTLE_FEASIBILITY_HPP_
