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

#include "rec/feasibility.hpp"

#include "rec/lp/solver.hpp"
#include "rec/settlement.hpp"

namespace rec {

FeasibilityResult max_uniform_ssr(const MeterSeries& series, const ContractSet& contracts,
                                  const KeyMatrix& initial_keys, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw InputError("feasibility search tolerance must be positive");
  }
  ContractSet search = contracts;  // the search overrides any configured floors
  for (MemberContract& m : search.members) m.ssr_floor = 0.0;
  search.validate(series);
  validate_keys(initial_keys, series);

  SettlementModel built = build_lp(series, search, initial_keys);
  const Eigen::VectorXd consumption_totals = series.consumption.colwise().sum();
  const int members = static_cast<int>(series.member_count());

  FeasibilityResult result;
  result.ssr = Eigen::VectorXd::Ones(members);
  lp::Basis basis = built.crash_basis;
  bool have_rates = false;

  // One probe per floor value; the model is shared, only the floor bounds
  // move, and each solve restarts from the previous basis.
  auto probe = [&](double floor) -> bool {
    for (int i = 0; i < members; ++i) {
      if (built.ssr[i]) built.model.set_variable_bounds(built.ssr[i], floor, 1.0);
    }
    lp::SolveOptions options;
    options.warm_start = &basis;
    const lp::Solution solution = lp::solve(built.model, options);
    ++result.probes;
    basis = solution.basis;
    if (solution.status == lp::Status::Infeasible) return false;
    if (solution.status != lp::Status::Optimal) {
      throw SolverError("feasibility probe ended without an optimum");
    }
    for (int i = 0; i < members; ++i) {
      result.ssr[i] = built.ssr[i] ? solution.values[built.ssr[i].id] : 1.0;
    }
    have_rates = true;
    return true;
  };

  double lo = 0.0;
  double hi = 1.0;
  if (probe(1.0)) {
    result.max_floor = 1.0;
    return result;
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // The rates of the last feasible probe are the rates at lo; if every probe
  // failed, lo is still the always-feasible zero floor and needs one solve.
  if (!have_rates && !probe(lo)) {
    throw SolverError("settlement reported infeasible with zero floors");
  }
  result.max_floor = lo;
  return result;
}

}  // namespace rec
