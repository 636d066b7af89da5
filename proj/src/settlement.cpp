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

#include "rec/settlement.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>
#include <utility>

#include "rec/csv.hpp"

namespace rec {
namespace {

constexpr double kVerifyTolerance = 1e-7;
constexpr double kElasticPenalty = 1e6;  // EUR per kWh of floor shortfall

std::string tagged(const char* prefix, int t, int i) {
  return std::string(prefix) + "_" + std::to_string(t) + "_" + std::to_string(i);
}

// One settlement LP over a chosen set of periods.  The self-supply-rate
// machinery (which couples periods) is attached only when requested; the
// elastic variant relaxes the floors into penalized shortfall variables for
// infeasibility diagnosis.
enum class SsrMode { None, Floors, Elastic };

SettlementModel build_over_periods(const MeterSeries& series, const ContractSet& contracts,
                                   const KeyMatrix& initial_keys,
                                   const std::vector<int>& periods, SsrMode ssr_mode,
                                   std::vector<lp::Variable>* elastic_out = nullptr) {
  const auto start_time = std::chrono::steady_clock::now();
  const int member_count = static_cast<int>(series.member_count());

  SettlementModel built;
  built.initial_alloc = initial_allocation(series, initial_keys);

  const Eigen::VectorXd sigma = series.net_production.rowwise().sum();
  for (const int t : periods) {
    if (sigma[t] > 0.0) built.active_periods.push_back(t);
  }

  // Objective constant: the share of every bill that no decision variable
  // can move (grid purchases of the full net consumption, grid sales of the
  // full net production), accumulated over the periods covered here.
  for (const int t : periods) {
    for (int i = 0; i < member_count; ++i) {
      const MemberContract& c = contracts.at(i);
      built.objective_offset += c.buy_price * series.net_consumption(t, i) -
                                c.sell_price * series.net_production(t, i);
    }
  }

  lp::Model& model = built.model;
  const int slots = static_cast<int>(built.active_periods.size());
  built.keys.resize(slots);
  built.allocated.resize(slots);
  built.verified.resize(slots);
  built.sold.resize(slots);
  built.deviation_up.resize(slots);
  built.deviation_down.resize(slots);

  double deviation_penalty = 0.0;  // sum over members of the fictive price
  for (int i = 0; i < member_count; ++i) deviation_penalty += contracts.at(i).deviation_price;

  // --- Columns ------------------------------------------------------------
  for (int slot = 0; slot < slots; ++slot) {
    const int t = built.active_periods[slot];
    auto& k_row = built.keys[slot];
    auto& a_row = built.allocated[slot];
    auto& v_row = built.verified[slot];
    auto& y_row = built.sold[slot];
    k_row.reserve(member_count);
    a_row.reserve(member_count);
    v_row.reserve(member_count);
    y_row.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      const double tol = contracts.tolerance(t, i);
      const double lo = std::max(0.0, initial_keys(t, i) - tol);
      const double hi = std::min(1.0, initial_keys(t, i) + tol);
      k_row.push_back(model.add_variable(tagged("k", t, i), lo, hi, 0.0));
    }
    for (int i = 0; i < member_count; ++i) {
      a_row.push_back(model.add_variable(tagged("a", t, i), 0.0, kInfinity, 0.0));
    }
    for (int i = 0; i < member_count; ++i) {
      const MemberContract& c = contracts.at(i);
      v_row.push_back(model.add_variable(tagged("v", t, i), 0.0,
                                         series.net_consumption(t, i),
                                         -(c.buy_price - c.local_buy_price)));
    }
    for (int i = 0; i < member_count; ++i) {
      const MemberContract& c = contracts.at(i);
      y_row.push_back(model.add_variable(tagged("y", t, i), 0.0,
                                         series.net_production(t, i),
                                         -(c.local_sell_price - c.sell_price)));
    }
    built.deviation_up[slot] = model.add_variable(tagged("adev", t, 0) + "p", 0.0,
                                                  kInfinity, deviation_penalty);
    built.deviation_down[slot] = model.add_variable(tagged("adev", t, 0) + "m", 0.0,
                                                    kInfinity, deviation_penalty);
  }

  const Eigen::VectorXd consumption_totals = series.consumption.colwise().sum();
  std::vector<lp::Variable> elastic;
  built.ssr.assign(member_count, lp::Variable{});
  if (ssr_mode != SsrMode::None) {
    for (int i = 0; i < member_count; ++i) {
      if (consumption_totals[i] <= 0.0) continue;  // rate defined as 1, no constraint
      const double floor = ssr_mode == SsrMode::Floors ? contracts.at(i).ssr_floor : 0.0;
      built.ssr[i] = model.add_variable("ssr_" + std::to_string(i), floor, 1.0, 0.0);
    }
    if (ssr_mode == SsrMode::Elastic) {
      elastic.assign(member_count, lp::Variable{});
      for (int i = 0; i < member_count; ++i) {
        if (consumption_totals[i] <= 0.0 || contracts.at(i).ssr_floor <= 0.0) continue;
        elastic[i] = model.add_variable("short_" + std::to_string(i), 0.0,
                                        contracts.at(i).ssr_floor, kElasticPenalty);
      }
    }
  }

  // --- Rows (order drives the crash basis below) ---------------------------
  struct SlotRows {
    std::vector<lp::Row> alloc;   // a = k * total production
    lp::Row balance;              // sum v = sum y
    std::vector<lp::Row> dev_up;  // a - a+ <= A
    std::vector<lp::Row> dev_dn;  // a + a- >= A
    std::vector<lp::Row> cap;     // v <= a (only where v can be positive)
    lp::Row share;                // sum k <= 1
  };
  std::vector<SlotRows> rows(slots);

  std::vector<lp::Term> terms;
  for (int slot = 0; slot < slots; ++slot) {
    const int t = built.active_periods[slot];
    const double total_production = sigma[t];
    SlotRows& sr = rows[slot];

    sr.alloc.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      sr.alloc.push_back(model.add_constraint(
          {{built.allocated[slot][i], 1.0}, {built.keys[slot][i], -total_production}},
          lp::Relation::Equal, 0.0));
    }

    terms.clear();
    for (int i = 0; i < member_count; ++i) terms.push_back({built.verified[slot][i], 1.0});
    for (int i = 0; i < member_count; ++i) terms.push_back({built.sold[slot][i], -1.0});
    sr.balance = model.add_constraint(terms, lp::Relation::Equal, 0.0);

    sr.dev_up.reserve(member_count);
    sr.dev_dn.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      sr.dev_up.push_back(model.add_constraint(
          {{built.allocated[slot][i], 1.0}, {built.deviation_up[slot], -1.0}},
          lp::Relation::LessEqual, built.initial_alloc(t, i)));
    }
    for (int i = 0; i < member_count; ++i) {
      sr.dev_dn.push_back(model.add_constraint(
          {{built.allocated[slot][i], 1.0}, {built.deviation_down[slot], 1.0}},
          lp::Relation::GreaterEqual, built.initial_alloc(t, i)));
    }

    sr.cap.reserve(member_count);
    for (int i = 0; i < member_count; ++i) {
      if (series.net_consumption(t, i) <= 0.0) continue;  // v is fixed at zero
      sr.cap.push_back(model.add_constraint(
          {{built.verified[slot][i], 1.0}, {built.allocated[slot][i], -1.0}},
          lp::Relation::LessEqual, 0.0));
    }

    terms.clear();
    for (int i = 0; i < member_count; ++i) terms.push_back({built.keys[slot][i], 1.0});
    sr.share = model.add_constraint(terms, lp::Relation::LessEqual, 1.0);
  }

  std::vector<lp::Row> ssr_rows(member_count, lp::Row{});
  std::vector<lp::Row> elastic_rows(member_count, lp::Row{});
  if (ssr_mode != SsrMode::None) {
    for (int i = 0; i < member_count; ++i) {
      if (!built.ssr[i]) continue;
      // Covered consumption, multiplied through by the member's total raw
      // consumption: total_C * rate - sum_t v = sum_t min(P, C).
      double behind_meter = 0.0;
      for (int t = 0; t < static_cast<int>(series.periods()); ++t) {
        behind_meter += std::min(series.production(t, i), series.consumption(t, i));
      }
      terms.clear();
      terms.push_back({built.ssr[i], consumption_totals[i]});
      for (int slot = 0; slot < slots; ++slot) {
        terms.push_back({built.verified[slot][i], -1.0});
      }
      ssr_rows[i] = model.add_constraint(terms, lp::Relation::Equal, behind_meter);
      if (ssr_mode == SsrMode::Elastic && elastic[i]) {
        elastic_rows[i] = model.add_constraint(
            {{built.ssr[i], 1.0}, {elastic[i], 1.0}}, lp::Relation::GreaterEqual,
            contracts.at(i).ssr_floor);
      }
    }
  }

  // --- Crash basis ----------------------------------------------------------
  // Feasible by construction when the floors are zero: every key sits at its
  // lower bound, each allocation column carries its definition row, the
  // worst-deviation member's row carries a-, and slacks cover the rest.
  // The matrix factorizes as a pure singleton cascade (no fill).
  lp::Basis& crash = built.crash_basis;
  crash.variables.assign(static_cast<std::size_t>(model.variable_count()),
                         lp::BasisStatus::AtLower);
  crash.slacks.assign(static_cast<std::size_t>(model.row_count()),
                      lp::BasisStatus::Basic);
  for (int slot = 0; slot < slots; ++slot) {
    const int t = built.active_periods[slot];
    int worst = 0;
    double worst_gap = -kInfinity;
    for (int i = 0; i < member_count; ++i) {
      const double gap =
          built.initial_alloc(t, i) - sigma[t] * model.lower_bound(built.keys[slot][i]);
      if (gap > worst_gap) {
        worst_gap = gap;
        worst = i;
      }
    }
    for (int i = 0; i < member_count; ++i) {
      crash.variables[built.allocated[slot][i].id] = lp::BasisStatus::Basic;
      crash.slacks[rows[slot].alloc[i].id] = lp::BasisStatus::AtLower;
    }
    crash.variables[built.deviation_down[slot].id] = lp::BasisStatus::Basic;
    crash.slacks[rows[slot].dev_dn[worst].id] = lp::BasisStatus::AtUpper;
  }
  for (int i = 0; i < member_count; ++i) {
    if (built.ssr[i]) {
      crash.variables[built.ssr[i].id] = lp::BasisStatus::Basic;
      crash.slacks[ssr_rows[i].id] = lp::BasisStatus::AtLower;
    }
  }

  if (elastic_out != nullptr) *elastic_out = std::move(elastic);

  built.model.set_build_seconds(
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count());
  return built;
}

std::vector<int> all_periods(const MeterSeries& series) {
  std::vector<int> periods(series.periods());
  for (std::size_t t = 0; t < periods.size(); ++t) periods[t] = static_cast<int>(t);
  return periods;
}

// Reads one solved model back into full-size matrices (rows for periods the
// model never saw are left untouched).
void extract_solution(const SettlementModel& built, const lp::Solution& solution,
                      SettlementResult& out) {
  const int members = static_cast<int>(built.keys.empty() ? 0 : built.keys[0].size());
  for (std::size_t slot = 0; slot < built.active_periods.size(); ++slot) {
    const int t = built.active_periods[slot];
    for (int i = 0; i < members; ++i) {
      out.keys(t, i) = solution.values[built.keys[slot][i].id];
      out.allocated(t, i) = solution.values[built.allocated[slot][i].id];
      out.verified(t, i) = solution.values[built.verified[slot][i].id];
      out.sold(t, i) = solution.values[built.sold[slot][i].id];
    }
    out.deviation_up[t] = solution.values[built.deviation_up[slot].id];
    out.deviation_down[t] = solution.values[built.deviation_down[slot].id];
  }
}

void verify_result(const MeterSeries& series, const ContractSet& contracts,
                   const KeyMatrix& initial_keys, const SettlementResult& result) {
  const int periods = static_cast<int>(series.periods());
  const int members = static_cast<int>(series.member_count());
  const Eigen::VectorXd sigma = series.net_production.rowwise().sum();

  auto fail = [](const std::string& what) {
    throw SolverError("settlement verification failed: " + what);
  };

  for (int t = 0; t < periods; ++t) {
    double key_sum = 0.0, v_sum = 0.0, y_sum = 0.0;
    for (int i = 0; i < members; ++i) {
      const double k = result.keys(t, i);
      key_sum += k;
      if (k < -kVerifyTolerance || k > 1.0 + kVerifyTolerance) fail("key out of [0,1]");
      if (std::abs(k - initial_keys(t, i)) >
          contracts.tolerance(t, i) + kVerifyTolerance) {
        fail("key outside its contractual tolerance");
      }
      if (std::abs(result.allocated(t, i) - k * sigma[t]) > kVerifyTolerance) {
        fail("allocation does not match key times total production");
      }
      const double v = result.verified(t, i);
      if (v < -kVerifyTolerance) fail("negative verified allocation");
      if (v > result.allocated(t, i) + kVerifyTolerance) fail("verified exceeds allocated");
      if (v > series.net_consumption(t, i) + kVerifyTolerance) {
        fail("verified exceeds net consumption");
      }
      const double y = result.sold(t, i);
      if (y < -kVerifyTolerance) fail("negative local sale");
      if (y > series.net_production(t, i) + kVerifyTolerance) {
        fail("local sale exceeds net production");
      }
      v_sum += v;
      y_sum += y;
    }
    if (key_sum > 1.0 + kVerifyTolerance) fail("keys sum beyond 1");
    if (std::abs(v_sum - y_sum) > kVerifyTolerance) {
      fail("verified total differs from sold total");
    }
  }
  for (int i = 0; i < members; ++i) {
    if (result.ssr[i] < contracts.at(i).ssr_floor - kVerifyTolerance) {
      fail("self-supply rate below its floor for member '" + series.members[i] + "'");
    }
  }
}

SettlementResult make_empty_result(const MeterSeries& series, const KeyMatrix& initial_keys) {
  const auto periods = static_cast<Eigen::Index>(series.periods());
  const auto members = static_cast<Eigen::Index>(series.member_count());
  SettlementResult result;
  result.keys = initial_keys;  // overwritten for active periods
  result.allocated = Eigen::MatrixXd::Zero(periods, members);
  result.verified = Eigen::MatrixXd::Zero(periods, members);
  result.sold = Eigen::MatrixXd::Zero(periods, members);
  result.deviation_up = Eigen::VectorXd::Zero(periods);
  result.deviation_down = Eigen::VectorXd::Zero(periods);
  return result;
}

// Diagnoses an infeasible settlement: floors become elastic with a heavy
// shortfall penalty, and any member whose shortfall stays positive at the
// optimum is named.
[[noreturn]] void diagnose_infeasible(const MeterSeries& series, const ContractSet& contracts,
                                      const KeyMatrix& initial_keys) {
  std::vector<lp::Variable> elastic;
  SettlementModel relaxed = build_over_periods(series, contracts, initial_keys,
                                               all_periods(series), SsrMode::Elastic,
                                               &elastic);
  lp::SolveOptions options;
  options.warm_start = &relaxed.crash_basis;
  const lp::Solution solution = lp::solve(relaxed.model, options);
  if (solution.status != lp::Status::Optimal) {
    throw SolverError("infeasibility diagnostic did not solve");
  }
  std::vector<std::string> binding;
  for (std::size_t i = 0; i < elastic.size(); ++i) {
    if (elastic[i] && solution.values[elastic[i].id] > 1e-6) {
      binding.push_back(series.members[i]);
    }
  }
  if (binding.empty()) {
    throw SolverError(
        "settlement reported infeasible but the elastic diagnostic met every floor");
  }
  std::string message = "self-supply floors cannot be met for:";
  for (const std::string& name : binding) message += " " + name;
  throw SsrInfeasibleError(std::move(message), std::move(binding));
}

}  // namespace

Eigen::MatrixXd initial_allocation(const MeterSeries& series, const KeyMatrix& keys) {
  validate_keys(keys, series);
  const Eigen::VectorXd sigma = series.net_production.rowwise().sum();
  return keys.array().colwise() * sigma.array();
}

Eigen::VectorXd compute_ssr(const MeterSeries& series, const Eigen::MatrixXd& verified) {
  const auto members = static_cast<Eigen::Index>(series.member_count());
  if (verified.rows() != static_cast<Eigen::Index>(series.periods()) ||
      verified.cols() != members) {
    throw ModelError("verified matrix does not match the series dimensions");
  }
  Eigen::VectorXd rates(members);
  for (Eigen::Index i = 0; i < members; ++i) {
    const double total = series.consumption.col(i).sum();
    if (total <= 0.0) {
      rates[i] = 1.0;  // nothing to cover
      continue;
    }
    const double covered = (series.production.col(i) + verified.col(i))
                               .cwiseMin(series.consumption.col(i))
                               .sum();
    rates[i] = covered / total;
  }
  return rates;
}

double linearized_ssr_numerator(const MeterSeries& series, const Eigen::MatrixXd& verified,
                                int period, int member) {
  if (period < 0 || period >= static_cast<int>(series.periods()) || member < 0 ||
      member >= static_cast<int>(series.member_count())) {
    throw ModelError("reading index out of range");
  }
  const double v = verified(period, member);
  const double cn = series.net_consumption(period, member);
  if (v > cn + kVerifyTolerance || v < -kVerifyTolerance) {
    throw ModelError("verified allocation outside [0, net consumption]");
  }
  return std::min(series.production(period, member), series.consumption(period, member)) + v;
}

SettlementModel build_lp(const MeterSeries& series, const ContractSet& contracts,
                         const KeyMatrix& initial_keys) {
  contracts.validate(series);
  validate_keys(initial_keys, series);
  return build_over_periods(series, contracts, initial_keys, all_periods(series),
                            SsrMode::Floors);
}

SettlementResult settle(const MeterSeries& series, const ContractSet& contracts,
                        const KeyMatrix& initial_keys, const SettleOptions& options) {
  contracts.validate(series);
  validate_keys(initial_keys, series);
  const int members = static_cast<int>(series.member_count());

  bool any_floor = false;
  for (int i = 0; i < members; ++i) any_floor = any_floor || contracts.at(i).ssr_floor > 0.0;
  if (options.decomposed && any_floor) {
    throw InputError(
        "decomposed settlement cannot enforce self-supply floors; "
        "they couple the periods");
  }

  SettlementResult result = make_empty_result(series, initial_keys);
  result.initial_alloc = initial_allocation(series, initial_keys);

  if (!options.decomposed) {
    // With every floor at zero the self-supply rows never bind (v stays
    // within max(0, C - P), so covered consumption cannot exceed the total);
    // leaving them out keeps the basis period-separable, which the solver
    // repays with thin spikes and cheap refactorizations.
    SettlementModel built = build_over_periods(series, contracts, initial_keys,
                                               all_periods(series),
                                               any_floor ? SsrMode::Floors : SsrMode::None);
    lp::SolveOptions solver_options = options.solver;
    if (solver_options.warm_start == nullptr) {
      solver_options.warm_start = &built.crash_basis;
    }
    const lp::Solution solution = lp::solve(built.model, solver_options);
    if (solution.status == lp::Status::Infeasible) {
      diagnose_infeasible(series, contracts, initial_keys);
    }
    if (solution.status != lp::Status::Optimal) {
      throw SolverError("settlement solve ended without an optimum");
    }
    extract_solution(built, solution, result);
    result.objective = solution.objective + built.objective_offset;
    result.statistics = solution.statistics;
  } else {
    // Independent per-period subproblems (the floors are all zero, so
    // nothing couples them); solved in parallel, assembled in period order.
    const Eigen::VectorXd sigma = series.net_production.rowwise().sum();
    std::vector<int> active;
    for (int t = 0; t < static_cast<int>(series.periods()); ++t) {
      if (sigma[t] > 0.0) active.push_back(t);
    }

    struct SlotOutcome {
      SettlementModel built;
      lp::Solution solution;
    };
    std::vector<SlotOutcome> outcomes(active.size());

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
      for (;;) {
        const std::size_t slot = cursor.fetch_add(1);
        if (slot >= active.size()) return;
        try {
          SlotOutcome& outcome = outcomes[slot];
          outcome.built = build_over_periods(series, contracts, initial_keys,
                                             {active[slot]}, SsrMode::None);
          lp::SolveOptions solver_options = options.solver;
          solver_options.warm_start = &outcome.built.crash_basis;
          outcome.solution = lp::solve(outcome.built.model, solver_options);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };

    int thread_count = options.threads > 0
                           ? options.threads
                           : static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::max(1, std::min<int>(thread_count,
                                             static_cast<int>(active.size())));
    if (thread_count <= 1 || active.empty()) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(thread_count);
      for (int w = 0; w < thread_count; ++w) pool.emplace_back(worker);
      for (std::thread& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    double objective = 0.0;
    lp::Statistics totals;
    for (SlotOutcome& outcome : outcomes) {
      if (outcome.solution.status == lp::Status::Infeasible) {
        throw SolverError("per-period settlement subproblem reported infeasible");
      }
      if (outcome.solution.status != lp::Status::Optimal) {
        throw SolverError("per-period settlement subproblem did not reach an optimum");
      }
      extract_solution(outcome.built, outcome.solution, result);
      objective += outcome.solution.objective + outcome.built.objective_offset;
      totals.rows += outcome.solution.statistics.rows;
      totals.columns += outcome.solution.statistics.columns;
      totals.nonzeros += outcome.solution.statistics.nonzeros;
      totals.iterations += outcome.solution.statistics.iterations;
      totals.refactorizations += outcome.solution.statistics.refactorizations;
      totals.build_seconds += outcome.solution.statistics.build_seconds;
      totals.solve_seconds += outcome.solution.statistics.solve_seconds;
    }
    // Constant bill terms of the periods outside every subproblem.
    for (int t = 0; t < static_cast<int>(series.periods()); ++t) {
      if (sigma[t] > 0.0) continue;
      for (int i = 0; i < members; ++i) {
        const MemberContract& c = contracts.at(i);
        objective += c.buy_price * series.net_consumption(t, i) -
                     c.sell_price * series.net_production(t, i);
      }
    }
    result.objective = objective;
    result.statistics = totals;
  }

  result.ssr = compute_ssr(series, result.verified);
  verify_result(series, contracts, initial_keys, result);
  return result;
}

void write_matrix_csv(const std::string& path, const MeterSeries& series,
                      const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != static_cast<Eigen::Index>(series.periods()) ||
      matrix.cols() != static_cast<Eigen::Index>(series.member_count())) {
    throw ModelError("matrix does not match the series dimensions");
  }
  std::vector<std::string> lines;
  lines.reserve(static_cast<std::size_t>(matrix.rows()) + 1);
  std::string header = "timestamp";
  for (const std::string& name : series.members) header += "," + name;
  lines.push_back(std::move(header));
  for (Eigen::Index t = 0; t < matrix.rows(); ++t) {
    std::string line = format_timestamp(series.grid.timestamp(static_cast<int>(t)));
    for (Eigen::Index i = 0; i < matrix.cols(); ++i) {
      line += "," + csv::format_fixed(matrix(t, i), 6);
    }
    lines.push_back(std::move(line));
  }
  csv::write_lines(path, lines);
}

}  // namespace rec
