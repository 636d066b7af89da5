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
// Ex-post settlement: builds the repartition-key linear program from
// metering data, member contracts and initial keys, solves it, and returns
// verified allocations, local sales, optimized keys and self-supply rates.

#ifndef RECSETTLE_SETTLEMENT_HPP_
#define RECSETTLE_SETTLEMENT_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rec/common.hpp"
#include "rec/contracts.hpp"
#include "rec/keygen.hpp"
#include "rec/lp/model.hpp"
#include "rec/lp/solver.hpp"
#include "rec/metering.hpp"

namespace rec {

// Settlement infeasibility (only the self-supply floors can cause it).
// Carries the members whose floors could not be met, established by an
// elastic diagnostic re-solve.
class SsrInfeasibleError : public Error {
 public:
  SsrInfeasibleError(std::string message, std::vector<std::string> members)
      : Error("infeasible", std::move(message)), members_(std::move(members)) {}
  const std::vector<std::string>& members() const { return members_; }

 private:
  std::vector<std::string> members_;
};

// The optimization model for one settlement run plus the bookkeeping needed
// to read the solution back.  Periods without net production are pre-solved
// (keys stay at their initial values, nothing is allocated) and do not
// appear in the model.
struct SettlementModel {
  lp::Model model;
  double objective_offset = 0.0;      // sum of xi_b*Cn - xi_s*Pn over all periods

  std::vector<int> active_periods;    // period indices present in the model

  // Column handles, indexed [slot][member] where slot follows active_periods.
  std::vector<std::vector<lp::Variable>> keys;        // k
  std::vector<std::vector<lp::Variable>> allocated;   // a
  std::vector<std::vector<lp::Variable>> verified;    // v
  std::vector<std::vector<lp::Variable>> sold;        // y
  std::vector<lp::Variable> deviation_up;             // a+ per slot
  std::vector<lp::Variable> deviation_down;           // a- per slot

  // Self-supply-rate columns, one per member with positive total raw
  // consumption; members without one have an invalid handle.
  std::vector<lp::Variable> ssr;

  Eigen::MatrixXd initial_alloc;      // A, full T x I

  // A primal-feasible starting basis whenever all floors are zero (floors
  // may make it infeasible, in which case it still factorizes and phase 1
  // starts close to the answer).
  lp::Basis crash_basis;
};

struct SettlementResult {
  KeyMatrix keys;                     // k, T x I
  Eigen::MatrixXd allocated;          // a, T x I, kWh
  Eigen::MatrixXd verified;           // v, T x I, kWh
  Eigen::MatrixXd sold;               // y, T x I, kWh
  Eigen::VectorXd deviation_up;       // a+ per period, kWh
  Eigen::VectorXd deviation_down;     // a- per period, kWh
  Eigen::VectorXd ssr;                // per member, fraction
  Eigen::MatrixXd initial_alloc;      // A, T x I, kWh
  double objective = 0.0;             // total cost in EUR, constant terms included
  lp::Statistics statistics;
};

struct SettleOptions {
  // Solve each period as an independent subproblem (valid only when every
  // self-supply floor is zero; the floors are the only cross-period link).
  bool decomposed = false;
  lp::SolveOptions solver;
  int threads = 0;                    // 0 = hardware concurrency (decomposed path)
};

// A = K[t][i] * sum_j Pn[t][j].
Eigen::MatrixXd initial_allocation(const MeterSeries& series, const KeyMatrix& keys);

// ssr[i] = sum_t min(P + v, C) / sum_t C, and 1 when the member never
// consumed anything.
Eigen::VectorXd compute_ssr(const MeterSeries& series, const Eigen::MatrixXd& verified);

// The linear form min(P,C) + v of the covered consumption for one reading;
// equals min(P + v, C) whenever v <= max(0, C - P) (checked).
double linearized_ssr_numerator(const MeterSeries& series, const Eigen::MatrixXd& verified,
                                int period, int member);

// Assembles the full settlement model over every period with net production.
SettlementModel build_lp(const MeterSeries& series, const ContractSet& contracts,
                         const KeyMatrix& initial_keys);

// Builds and solves the settlement.  Throws SsrInfeasibleError when the
// self-supply floors cannot all be met (after a diagnostic re-solve that
// names the members responsible); solver breakdowns propagate as
// SolverError.
SettlementResult settle(const MeterSeries& series, const ContractSet& contracts,
                        const KeyMatrix& initial_keys, const SettleOptions& options = {});

// CSV export of a T x I settlement matrix ("timestamp,<members...>" header,
// six fractional digits).
void write_matrix_csv(const std::string& path, const MeterSeries& series,
                      const Eigen::MatrixXd& matrix);

}  // namespace rec

#endif  // RECSETTLE_SETTLEMENT_HPP_
