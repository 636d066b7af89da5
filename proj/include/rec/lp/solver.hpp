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

#ifndef RECSETTLE_LP_SOLVER_HPP_
#define RECSETTLE_LP_SOLVER_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "rec/lp/model.hpp"

namespace rec::lp {

enum class Status : std::uint8_t { Optimal, Infeasible, Unbounded };

// Simplex state of one column (structural variable or row slack).
enum class BasisStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeAtZero };

// A (re)startable basis: one status per structural variable and one per row
// slack.  Empty vectors mean "no warm start".
struct Basis {
  std::vector<BasisStatus> variables;
  std::vector<BasisStatus> slacks;

  bool empty() const { return variables.empty() && slacks.empty(); }
};

struct Statistics {
  std::int64_t rows = 0;
  std::int64_t columns = 0;
  std::int64_t nonzeros = 0;
  std::int64_t iterations = 0;
  std::int64_t refactorizations = 0;
  double build_seconds = 0.0;  // copied from Model::build_seconds()
  double solve_seconds = 0.0;
};

struct SolveOptions {
  double feasibility_tolerance = 1e-7;   // max bound/row violation accepted
  double optimality_tolerance = 1e-7;    // reduced-cost threshold
  int refactor_interval = 0;             // pivots between refactorizations;
                                         // 0: scale with the basis size
  std::int64_t max_iterations = -1;      // -1: scale with model size
  const Basis* warm_start = nullptr;     // optional crash/restart basis
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd values;  // one entry per variable; meaningful when Optimal
  Basis basis;             // final basis, reusable as a warm start
  Statistics statistics;
};

// Solves the model with a bounded-variable revised simplex method.  The
// pivot rule is deterministic (largest reduced cost, ties to the lowest
// variable index, Bland's rule after long degenerate stretches), so repeated
// runs return bit-identical values.  Infeasible/Unbounded are reported via
// the status; numerical breakdown that survives refactorization throws
// SolverError.
Solution solve(const Model& model, const SolveOptions& options = {});

}  // namespace rec::lp

#endif  // RECSETTLE_LP_SOLVER_HPP_
