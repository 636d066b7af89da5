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
// Bounded-variable revised simplex.  Columns 0..n-1 are the structural
// variables, n..n+m-1 the row slacks (row r reads  a_r.x + s_r = b_r  with
// slack bounds encoding the relation).  The basis inverse is kept as a
// sparse LU factorization plus a product-form eta file, refactorized on a
// fixed pivot schedule; right-hand-side and reduced-cost vectors are
// maintained incrementally and recomputed exactly at every refactorization.
// Infeasible starts run a composite phase 1 (piecewise-linear infeasibility
// objective with a long-step ratio test) before the cost phase.

#include "rec/lp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "lp/factor.hpp"
#include "rec/common.hpp"

namespace rec::lp {
namespace {

using internal::BasisFactor;
using internal::ColumnSource;
using internal::FactorReport;
using internal::SparseVector;

constexpr double kPivotTolerance = 1e-9;    // smallest |w_i| accepted as a block
constexpr double kPivotBreakdown = 1e-10;   // below this after refactorization -> error
constexpr double kDegenerateStep = 1e-11;   // steps this small count as degenerate
constexpr std::int64_t kBlandTrigger = 1000;

struct HeapEntry {
  double score;       // |reduced cost| snapshot
  std::int32_t col;
};

// Max-heap: larger |d| first, ties to the lower column index.
struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.col > b.col;
  }
};

class Simplex {
 public:
  Simplex(const Model& model, const SolveOptions& options)
      : model_(model), options_(options) {}

  Solution run();

 private:
  enum class Pricing { None, Candidate };

  void expand_columns();
  void install_basis();
  void default_basis();
  void initial_values_and_rhs();
  void factorize_with_repair();
  void refactorize(bool recompute_rhs_exactly);
  void recompute_basics();
  void recompute_infeasibility();
  void recompute_reduced_costs();
  void rebuild_heap();
  double current_cost(std::int32_t j) const {
    return phase1_ ? c1_[j] : cost_[j];
  }
  bool eligible(std::int32_t j, double d) const;
  std::int32_t pick_entering();
  void load_column(std::int32_t j, SparseVector& out) const;
  void add_column_to(std::int32_t j, double coeff, Eigen::VectorXd& dense) const;
  double violation(std::int32_t j) const;
  void pivot_common_updates(std::int32_t q, double theta_dual);
  void apply_cost_corrections(const std::vector<std::pair<std::int32_t, double>>& deltas);
  bool iterate();  // one simplex step; false when the phase is priced out
  Solution finish(Status status);

  const Model& model_;
  SolveOptions options_;

  std::int64_t m_ = 0, n_ = 0, total_ = 0;
  std::vector<double> lo_, hi_, cost_, c1_;
  std::vector<std::int64_t> col_start_;
  std::vector<std::int32_t> row_index_;
  std::vector<double> col_value_;

  std::vector<BasisStatus> status_;
  std::vector<std::int32_t> basic_;   // position -> column
  std::vector<std::int32_t> pos_of_;  // column -> position, -1 if nonbasic
  Eigen::VectorXd x_, d_, rhs_, r_;

  BasisFactor factor_;
  SparseVector w_, rho_, alpha_, corr_;
  Eigen::VectorXd dense_tmp_;

  std::vector<HeapEntry> heap_;
  bool phase1_ = false;
  double phi_ = 0.0;  // total infeasibility (phase-1 objective)
  bool bland_ = false;
  bool confirmed_ = false;
  bool throw_unbounded_flag_ = false;
  std::int64_t degenerate_streak_ = 0;
  std::int64_t iterations_ = 0;
  std::int64_t refactorizations_ = 0;
  std::int64_t confirm_rounds_ = 0;
  int pivots_since_factor_ = 0;
  std::int64_t refactor_interval_ = 100;
  std::int64_t eta_entry_budget_ = 8192;

  struct Breakpoint {
    double theta;
    std::int32_t position;  // -1 for the entering variable's own range
    std::int8_t kind;       // 0 = slope gain, 1 = block, 2 = flip
    double gain;
  };
  std::vector<Breakpoint> breakpoints_;
};

void Simplex::expand_columns() {
  m_ = model_.row_count();
  n_ = model_.variable_count();
  total_ = n_ + m_;

  lo_.resize(static_cast<std::size_t>(total_));
  hi_.resize(static_cast<std::size_t>(total_));
  cost_.assign(static_cast<std::size_t>(total_), 0.0);
  c1_.assign(static_cast<std::size_t>(total_), 0.0);
  for (std::int64_t j = 0; j < n_; ++j) {
    lo_[j] = model_.lower()[j];
    hi_[j] = model_.upper()[j];
    cost_[j] = model_.costs()[j];
  }
  const std::vector<Relation>& rel = model_.relations();
  for (std::int64_t r = 0; r < m_; ++r) {
    switch (rel[r]) {
      case Relation::LessEqual:
        lo_[n_ + r] = 0.0;
        hi_[n_ + r] = kInfinity;
        break;
      case Relation::Equal:
        lo_[n_ + r] = 0.0;
        hi_[n_ + r] = 0.0;
        break;
      case Relation::GreaterEqual:
        lo_[n_ + r] = -kInfinity;
        hi_[n_ + r] = 0.0;
        break;
    }
  }

  // Column-wise copy of the row-wise model storage (counting sort).
  const auto& row_start = model_.row_start();
  const auto& cols = model_.column_index();
  const auto& vals = model_.values();
  col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const std::int32_t j : cols) col_start_[static_cast<std::size_t>(j) + 1] += 1;
  for (std::int64_t j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
  row_index_.resize(cols.size());
  col_value_.resize(vals.size());
  std::vector<std::int64_t> next(col_start_.begin(), col_start_.end() - 1);
  for (std::int64_t r = 0; r < m_; ++r) {
    for (std::int64_t p = row_start[r]; p < row_start[r + 1]; ++p) {
      const std::int64_t q = next[cols[p]]++;
      row_index_[q] = static_cast<std::int32_t>(r);
      col_value_[q] = vals[p];
    }
  }

  rhs_ = Eigen::Map<const Eigen::VectorXd>(model_.rhs().data(), m_);
}

void Simplex::default_basis() {
  for (std::int64_t j = 0; j < n_; ++j) {
    if (std::isfinite(lo_[j])) {
      status_[j] = BasisStatus::AtLower;
    } else if (std::isfinite(hi_[j])) {
      status_[j] = BasisStatus::AtUpper;
    } else {
      status_[j] = BasisStatus::FreeAtZero;
    }
  }
  for (std::int64_t r = 0; r < m_; ++r) status_[n_ + r] = BasisStatus::Basic;
}

void Simplex::install_basis() {
  status_.assign(static_cast<std::size_t>(total_), BasisStatus::AtLower);
  bool use_warm = false;
  if (options_.warm_start != nullptr && !options_.warm_start->empty()) {
    const Basis& warm = *options_.warm_start;
    if (static_cast<std::int64_t>(warm.variables.size()) == n_ &&
        static_cast<std::int64_t>(warm.slacks.size()) == m_) {
      std::int64_t basics = 0;
      for (std::int64_t j = 0; j < n_; ++j) {
        status_[j] = warm.variables[j];
        if (status_[j] == BasisStatus::Basic) ++basics;
      }
      for (std::int64_t r = 0; r < m_; ++r) {
        status_[n_ + r] = warm.slacks[r];
        if (status_[n_ + r] == BasisStatus::Basic) ++basics;
      }
      use_warm = basics == m_;
    }
  }
  if (!use_warm) default_basis();

  // Repair impossible nonbasic placements (a bound that is not finite).
  for (std::int64_t j = 0; j < total_; ++j) {
    if (status_[j] == BasisStatus::AtLower && !std::isfinite(lo_[j])) {
      status_[j] = std::isfinite(hi_[j]) ? BasisStatus::AtUpper : BasisStatus::FreeAtZero;
    } else if (status_[j] == BasisStatus::AtUpper && !std::isfinite(hi_[j])) {
      status_[j] = std::isfinite(lo_[j]) ? BasisStatus::AtLower : BasisStatus::FreeAtZero;
    }
  }

  basic_.clear();
  basic_.reserve(static_cast<std::size_t>(m_));
  pos_of_.assign(static_cast<std::size_t>(total_), -1);
  for (std::int64_t j = 0; j < total_; ++j) {
    if (status_[j] == BasisStatus::Basic) {
      pos_of_[j] = static_cast<std::int32_t>(basic_.size());
      basic_.push_back(static_cast<std::int32_t>(j));
    }
  }
}

double nonbasic_value(BasisStatus s, double lo, double hi) {
  switch (s) {
    case BasisStatus::AtLower: return lo;
    case BasisStatus::AtUpper: return hi;
    case BasisStatus::FreeAtZero: return 0.0;
    case BasisStatus::Basic: break;
  }
  return 0.0;
}

void Simplex::initial_values_and_rhs() {
  x_ = Eigen::VectorXd::Zero(total_);
  r_ = rhs_;
  for (std::int64_t j = 0; j < total_; ++j) {
    if (status_[j] == BasisStatus::Basic) continue;
    const double v = nonbasic_value(status_[j], lo_[j], hi_[j]);
    x_[j] = v;
    if (v != 0.0) add_column_to(static_cast<std::int32_t>(j), -v, r_);
  }
}

void Simplex::add_column_to(std::int32_t j, double coeff, Eigen::VectorXd& dense) const {
  if (j >= n_) {
    dense[j - n_] += coeff;
    return;
  }
  for (std::int64_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    dense[row_index_[p]] += coeff * col_value_[p];
  }
}

void Simplex::load_column(std::int32_t j, SparseVector& out) const {
  out.clear();
  if (j >= n_) {
    out.set(j - static_cast<std::int32_t>(n_), 1.0);
    return;
  }
  for (std::int64_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
    out.set(row_index_[p], col_value_[p]);
  }
}

void Simplex::factorize_with_repair() {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const FactorReport report = factor_.factorize(basic_);
    if (report.ok()) {
      if (attempt > 0) rebuild_heap();  // statuses changed during repair
      return;
    }
    if (report.failed_positions.size() != report.free_rows.size()) {
      throw SolverError("basis repair bookkeeping failed");
    }
    // Swap each unpivotable column for the slack of an uncovered row; the
    // displaced column moves to its nearest bound.
    for (std::size_t k = 0; k < report.failed_positions.size(); ++k) {
      const std::int32_t pos = report.failed_positions[k];
      const std::int32_t row = report.free_rows[k];
      const std::int32_t out_col = basic_[pos];
      const std::int32_t slack = static_cast<std::int32_t>(n_) + row;
      if (pos_of_[slack] >= 0) {
        throw SolverError("basis repair found a covered row slack");
      }
      BasisStatus s = std::isfinite(lo_[out_col]) ? BasisStatus::AtLower
                      : std::isfinite(hi_[out_col]) ? BasisStatus::AtUpper
                                                    : BasisStatus::FreeAtZero;
      status_[out_col] = s;
      pos_of_[out_col] = -1;
      const double v = nonbasic_value(s, lo_[out_col], hi_[out_col]);
      x_[out_col] = v;
      if (v != 0.0) add_column_to(out_col, -v, r_);
      // The slack enters the basis; remove its (nonbasic) contribution.
      if (x_[slack] != 0.0) add_column_to(slack, x_[slack], r_);
      status_[slack] = BasisStatus::Basic;
      pos_of_[slack] = pos;
      basic_[pos] = slack;
    }
  }
  throw SolverError("basis factorization kept failing after repeated repair");
}

void Simplex::recompute_basics() {
  dense_tmp_ = r_;
  factor_.ftran_dense(dense_tmp_);
  for (std::int64_t p = 0; p < m_; ++p) x_[basic_[p]] = dense_tmp_[p];
}

double Simplex::violation(std::int32_t j) const {
  const double v = x_[j];
  if (v < lo_[j]) return lo_[j] - v;
  if (v > hi_[j]) return v - hi_[j];
  return 0.0;
}

void Simplex::recompute_infeasibility() {
  const double ftol = options_.feasibility_tolerance;
  phi_ = 0.0;
  std::fill(c1_.begin(), c1_.end(), 0.0);
  for (std::int64_t p = 0; p < m_; ++p) {
    const std::int32_t j = basic_[p];
    const double v = x_[j];
    if (v < lo_[j] - ftol) {
      c1_[j] = -1.0;
      phi_ += lo_[j] - v;
    } else if (v > hi_[j] + ftol) {
      c1_[j] = 1.0;
      phi_ += v - hi_[j];
    }
  }
  phase1_ = phi_ > ftol;
}

void Simplex::recompute_reduced_costs() {
  dense_tmp_.setZero(m_);
  for (std::int64_t p = 0; p < m_; ++p) dense_tmp_[p] = current_cost(basic_[p]);
  factor_.btran_dense(dense_tmp_);  // now the row multipliers y
  d_.setZero(total_);
  for (std::int64_t j = 0; j < n_; ++j) {
    if (status_[j] == BasisStatus::Basic) continue;
    double dj = current_cost(static_cast<std::int32_t>(j));
    for (std::int64_t p = col_start_[j]; p < col_start_[j + 1]; ++p) {
      dj -= dense_tmp_[row_index_[p]] * col_value_[p];
    }
    d_[j] = dj;
  }
  for (std::int64_t r = 0; r < m_; ++r) {
    const std::int64_t j = n_ + r;
    if (status_[j] == BasisStatus::Basic) continue;
    d_[j] = current_cost(static_cast<std::int32_t>(j)) - dense_tmp_[r];
  }
}

bool Simplex::eligible(std::int32_t j, double d) const {
  if (status_[j] == BasisStatus::Basic) return false;
  if (lo_[j] == hi_[j]) return false;  // fixed variables never move
  const double tol = options_.optimality_tolerance;
  switch (status_[j]) {
    case BasisStatus::AtLower: return d < -tol;
    case BasisStatus::AtUpper: return d > tol;
    case BasisStatus::FreeAtZero: return std::abs(d) > tol;
    case BasisStatus::Basic: break;
  }
  return false;
}

void Simplex::rebuild_heap() {
  heap_.clear();
  for (std::int64_t j = 0; j < total_; ++j) {
    const std::int32_t jj = static_cast<std::int32_t>(j);
    if (eligible(jj, d_[j])) heap_.push_back({std::abs(d_[j]), jj});
  }
  std::make_heap(heap_.begin(), heap_.end(), HeapLess{});
}

std::int32_t Simplex::pick_entering() {
  if (bland_) {
    for (std::int64_t j = 0; j < total_; ++j) {
      if (eligible(static_cast<std::int32_t>(j), d_[j])) return static_cast<std::int32_t>(j);
    }
    return -1;
  }
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), HeapLess{});
    const HeapEntry top = heap_.back();
    heap_.pop_back();
    const std::int32_t j = top.col;
    const double dj = d_[j];
    if (!eligible(j, dj)) continue;  // stale: basic now or sign flipped
    const double score = std::abs(dj);
    if (std::abs(score - top.score) > 1e-12 * (1.0 + score)) {
      heap_.push_back({score, j});  // stale magnitude: re-queue at its true score
      std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
      continue;
    }
    return j;
  }
  // Heap exhausted: one authoritative scan; rebuild if anything is left.
  std::int32_t best = -1;
  double best_score = options_.optimality_tolerance;
  for (std::int64_t j = 0; j < total_; ++j) {
    const std::int32_t jj = static_cast<std::int32_t>(j);
    if (!eligible(jj, d_[j])) continue;
    const double score = std::abs(d_[j]);
    if (score > best_score) {
      best = jj;
      best_score = score;
    }
  }
  if (best >= 0) rebuild_heap();
  return best;
}

void Simplex::apply_cost_corrections(
    const std::vector<std::pair<std::int32_t, double>>& deltas) {
  // Reduced-cost fix-up after phase-1 cost changes on still-basic rows:
  // d -= (B^-T sum delta_i e_pos_i)' A  restricted to nonbasic columns.
  if (deltas.empty()) return;
  corr_.clear();
  for (const auto& [pos, delta] : deltas) corr_.add(pos, delta);
  factor_.btran(corr_);
  alpha_.clear();
  const auto& row_start = model_.row_start();
  const auto& cols = model_.column_index();
  const auto& vals = model_.values();
  for (const std::int32_t r : corr_.index) {
    const double yr = corr_.value[r];
    if (yr == 0.0) continue;
    for (std::int64_t p = row_start[r]; p < row_start[r + 1]; ++p) {
      alpha_.add(cols[p], yr * vals[p]);
    }
    alpha_.add(static_cast<std::int32_t>(n_) + r, yr);
  }
  for (const std::int32_t j : alpha_.index) {
    if (status_[j] == BasisStatus::Basic) continue;
    const double a = alpha_.value[j];
    if (a == 0.0) continue;
    d_[j] -= a;
    if (eligible(j, d_[j])) {
      heap_.push_back({std::abs(d_[j]), j});
      std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
    }
  }
}

void Simplex::refactorize(bool recompute_rhs_exactly) {
  if (recompute_rhs_exactly) {
    // Rebuild r = b - N x_N from scratch to shed incremental drift.
    r_ = rhs_;
    for (std::int64_t j = 0; j < total_; ++j) {
      if (status_[j] == BasisStatus::Basic || x_[j] == 0.0) continue;
      add_column_to(static_cast<std::int32_t>(j), -x_[j], r_);
    }
  }
  factorize_with_repair();
  ++refactorizations_;
  pivots_since_factor_ = 0;
  recompute_basics();
  const bool was_phase1 = phase1_;
  recompute_infeasibility();
  recompute_reduced_costs();
  if (phase1_ != was_phase1) rebuild_heap();
}

// One simplex iteration.  Returns false when no eligible entering column
// exists for the current phase objective.
bool Simplex::iterate() {
  const std::int32_t q = pick_entering();
  if (q < 0) return false;
  confirmed_ = false;

  const double dq = d_[q];
  double dir;
  if (status_[q] == BasisStatus::AtLower) {
    dir = 1.0;
  } else if (status_[q] == BasisStatus::AtUpper) {
    dir = -1.0;
  } else {
    dir = dq < 0.0 ? 1.0 : -1.0;
  }

  load_column(q, w_);
  factor_.ftran(w_);

  const double ftol = options_.feasibility_tolerance;
  const double own_range = hi_[q] - lo_[q];  // may be +inf

  // --- Ratio test ---------------------------------------------------------
  double theta = kInfinity;
  std::int32_t leaving_pos = -1;
  bool flip = false;
  double leave_to = 0.0;
  std::vector<std::pair<std::int32_t, double>> cost_deltas;

  if (!phase1_) {
    // Two-pass (Harris) ratio test with a small relaxation, then the
    // largest pivot within the relaxed step; ties to the lowest column id.
    const double delta = bland_ ? 0.0 : 1e-9;
    double limit = std::isfinite(own_range) ? own_range : kInfinity;
    for (const std::int32_t i : w_.index) {
      const double wi = w_.value[i];
      if (std::abs(wi) <= kPivotTolerance) continue;
      const double rate = -dir * wi;
      const std::int32_t b = basic_[i];
      double room;
      if (rate > 0.0) {
        if (!std::isfinite(hi_[b])) continue;
        room = (hi_[b] + delta - x_[b]) / rate;
      } else {
        if (!std::isfinite(lo_[b])) continue;
        room = (lo_[b] - delta - x_[b]) / rate;
      }
      limit = std::min(limit, std::max(room, 0.0));
    }
    if (!std::isfinite(limit)) {
      throw_unbounded_flag_ = true;
      return false;
    }

    double best_pivot = 0.0;
    std::int32_t best_col = -1;
    double best_theta = 0.0;
    for (const std::int32_t i : w_.index) {
      const double wi = w_.value[i];
      if (std::abs(wi) <= kPivotTolerance) continue;
      const double rate = -dir * wi;
      const std::int32_t b = basic_[i];
      double t;
      if (rate > 0.0) {
        if (!std::isfinite(hi_[b])) continue;
        t = std::max((hi_[b] - x_[b]) / rate, 0.0);
      } else {
        if (!std::isfinite(lo_[b])) continue;
        t = std::max((lo_[b] - x_[b]) / rate, 0.0);
      }
      if (t > limit) continue;
      const bool better =
          bland_ ? (best_col < 0 || t < best_theta ||
                    (t == best_theta && b < best_col))
                 : (std::abs(wi) > best_pivot ||
                    (std::abs(wi) == best_pivot && best_col >= 0 && b < best_col));
      if (better) {
        best_pivot = std::abs(wi);
        best_col = b;
        best_theta = t;
        leaving_pos = i;
      }
    }
    if (leaving_pos < 0) {
      if (!std::isfinite(own_range)) {
        throw_unbounded_flag_ = true;
        return false;
      }
      flip = true;
      theta = own_range;
    } else if (std::isfinite(own_range) && own_range < best_theta) {
      flip = true;
      theta = own_range;
      leaving_pos = -1;
    } else {
      theta = best_theta;
      const double rate_p = -dir * w_.value[leaving_pos];
      leave_to = rate_p > 0.0 ? hi_[basic_[leaving_pos]] : lo_[basic_[leaving_pos]];
    }
  } else {
    // Phase 1: piecewise-linear ratio test.  Walk breakpoints in step
    // order; infeasible basics crossing their violated bound flatten the
    // slope and may be passed, feasible basics block.
    breakpoints_.clear();
    for (const std::int32_t i : w_.index) {
      const double wi = w_.value[i];
      if (std::abs(wi) <= kPivotTolerance) continue;
      const double rate = -dir * wi;
      const std::int32_t b = basic_[i];
      const double xv = x_[b];
      if (xv < lo_[b] - ftol) {
        if (rate > 0.0) {
          breakpoints_.push_back({(lo_[b] - xv) / rate, i, 0, rate});
          if (std::isfinite(hi_[b])) breakpoints_.push_back({(hi_[b] - xv) / rate, i, 1, 0.0});
        }
      } else if (xv > hi_[b] + ftol) {
        if (rate < 0.0) {
          breakpoints_.push_back({(hi_[b] - xv) / rate, i, 0, -rate});
          if (std::isfinite(lo_[b])) breakpoints_.push_back({(lo_[b] - xv) / rate, i, 1, 0.0});
        }
      } else {
        if (rate > 0.0 && std::isfinite(hi_[b])) {
          breakpoints_.push_back({std::max((hi_[b] - xv) / rate, 0.0), i, 1, 0.0});
        } else if (rate < 0.0 && std::isfinite(lo_[b])) {
          breakpoints_.push_back({std::max((lo_[b] - xv) / rate, 0.0), i, 1, 0.0});
        }
      }
    }
    if (std::isfinite(own_range)) {
      breakpoints_.push_back({own_range, -1, 2, 0.0});
    }
    std::sort(breakpoints_.begin(), breakpoints_.end(),
              [](const Breakpoint& a, const Breakpoint& b) {
                if (a.theta != b.theta) return a.theta < b.theta;
                if (a.kind != b.kind) return a.kind < b.kind;
                return a.position < b.position;
              });
    double slope = dir * dq;  // negative: moving improves total infeasibility
    bool stopped = false;
    for (const Breakpoint& bp : breakpoints_) {
      if (bp.kind == 1) {  // block on a feasible bound (or far bound)
        theta = bp.theta;
        leaving_pos = bp.position;
        const std::int32_t b = basic_[leaving_pos];
        const double rate = -dir * w_.value[leaving_pos];
        leave_to = rate > 0.0 ? hi_[b] : lo_[b];
        // A blocking far bound of a passed infeasible basic: it is feasible
        // by the time it blocks, its cost is handled below via 'passed'.
        stopped = true;
        break;
      }
      if (bp.kind == 2) {  // the entering variable hits its opposite bound
        theta = bp.theta;
        flip = true;
        stopped = true;
        break;
      }
      // Slope gain: an infeasible basic reaches its violated bound.
      slope += bp.gain;
      if (slope >= -1e-12) {
        theta = bp.theta;
        leaving_pos = bp.position;
        const std::int32_t b = basic_[leaving_pos];
        leave_to = x_[b] < lo_[b] ? lo_[b] : hi_[b];
        stopped = true;
        break;
      }
      // Passed through: the basic turns feasible, its phase-1 cost drops.
      const std::int32_t b = basic_[bp.position];
      cost_deltas.emplace_back(bp.position, -c1_[b]);
      c1_[b] = 0.0;
    }
    if (!stopped) {
      throw SolverError("phase-1 ratio test found no finite step");
    }
  }

  // If the walk zeroed the phase-1 cost of the very variable that now
  // leaves, its cost change belongs to the leaving column (handled below),
  // not to the still-basic correction pass.
  double leave_cost_delta = 0.0;
  if (leaving_pos >= 0 && !cost_deltas.empty()) {
    for (std::size_t k = 0; k < cost_deltas.size(); ++k) {
      if (cost_deltas[k].first == leaving_pos) {
        leave_cost_delta = cost_deltas[k].second;
        cost_deltas.erase(cost_deltas.begin() + static_cast<std::ptrdiff_t>(k));
        break;
      }
    }
  }

  // --- Commit the step -----------------------------------------------------
  if (flip) {
    const double step = dir * theta;
    for (const std::int32_t i : w_.index) {
      const std::int32_t b = basic_[i];
      const double old = x_[b];
      x_[b] -= step * w_.value[i];
      if (phase1_) phi_ += violation(b) - (old < lo_[b] ? lo_[b] - old
                                           : old > hi_[b] ? old - hi_[b] : 0.0);
    }
    x_[q] += step;
    status_[q] = status_[q] == BasisStatus::AtLower ? BasisStatus::AtUpper
                                                    : BasisStatus::AtLower;
    add_column_to(q, -step, r_);
    ++iterations_;
    if (theta > kDegenerateStep) {
      degenerate_streak_ = 0;
      bland_ = false;
    }
    apply_cost_corrections(cost_deltas);
    return true;
  }

  const std::int32_t p = leaving_pos;
  const double wp = w_.value[p];
  if (std::abs(wp) < kPivotBreakdown) {
    if (pivots_since_factor_ > 0) {
      refactorize(true);
      return true;  // retry the iteration on fresh numbers
    }
    throw SolverError("pivot magnitude below 1e-10 directly after refactorization");
  }

  // Pricing row rho = B^-T e_p against the old basis.
  rho_.clear();
  rho_.set(p, 1.0);
  factor_.btran(rho_);
  double alpha_q = 0.0;
  if (q >= n_) {
    alpha_q = rho_.value[q - n_];
  } else {
    for (std::int64_t pp = col_start_[q]; pp < col_start_[q + 1]; ++pp) {
      alpha_q += rho_.value[row_index_[pp]] * col_value_[pp];
    }
  }
  if (std::abs(alpha_q - wp) > 1e-7 * (1.0 + std::abs(wp))) {
    if (pivots_since_factor_ > 0) {
      refactorize(true);
      return true;
    }
    throw SolverError("inconsistent pivot between forward and transposed solves");
  }

  const std::int32_t leave = basic_[p];
  const double xq_old = x_[q];

  for (const std::int32_t i : w_.index) {
    const std::int32_t b = basic_[i];
    const double old = x_[b];
    x_[b] -= dir * theta * w_.value[i];
    if (phase1_) phi_ += violation(b) - (old < lo_[b] ? lo_[b] - old
                                         : old > hi_[b] ? old - hi_[b] : 0.0);
  }
  if (phase1_) {
    // The leaving variable snaps exactly onto a bound: remove any residual
    // violation it contributed (x update above already accounted the move).
    phi_ -= violation(leave);
  }
  x_[leave] = leave_to;
  x_[q] = xq_old + dir * theta;

  add_column_to(q, xq_old, r_);
  add_column_to(leave, -leave_to, r_);

  const double c1_leave = c1_[leave];
  c1_[leave] = 0.0;
  status_[leave] = leave_to == lo_[leave] ? BasisStatus::AtLower : BasisStatus::AtUpper;
  pos_of_[leave] = -1;
  status_[q] = BasisStatus::Basic;
  pos_of_[q] = p;
  basic_[p] = q;

  pivot_common_updates(q, dq / alpha_q);
  d_[leave] = -(dq / alpha_q);  // alpha of the leaving column is exactly 1
  if (phase1_ && c1_leave != 0.0) {
    d_[leave] -= c1_leave;  // its own phase-1 cost vanishes once nonbasic
  }
  d_[leave] += leave_cost_delta;
  if (eligible(leave, d_[leave])) {
    heap_.push_back({std::abs(d_[leave]), leave});
    std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
  }

  factor_.push_eta(w_, p);
  ++pivots_since_factor_;
  ++iterations_;

  apply_cost_corrections(cost_deltas);

  if (theta <= kDegenerateStep) {
    if (++degenerate_streak_ > kBlandTrigger) bland_ = true;
  } else {
    degenerate_streak_ = 0;
    bland_ = false;
  }

  if (pivots_since_factor_ >= refactor_interval_ ||
      factor_.eta_entries() > eta_entry_budget_) {
    // Exact right-hand-side rebuild only every few factorizations; the
    // incremental vector is cheap to keep and drifts very slowly.
    refactorize(refactorizations_ % 8 == 7);
  }
  if (heap_.size() > static_cast<std::size_t>(4 * total_ + 64)) rebuild_heap();
  return true;
}

void Simplex::pivot_common_updates(std::int32_t q, double theta_dual) {
  // d_j -= theta_dual * (rho' a_j) for all nonbasic j (rho against the old
  // basis was computed in iterate()); the entering column ends at zero.
  alpha_.clear();
  const auto& row_start = model_.row_start();
  const auto& cols = model_.column_index();
  const auto& vals = model_.values();
  for (const std::int32_t r : rho_.index) {
    const double yr = rho_.value[r];
    if (yr == 0.0) continue;
    for (std::int64_t pp = row_start[r]; pp < row_start[r + 1]; ++pp) {
      alpha_.add(cols[pp], yr * vals[pp]);
    }
    alpha_.add(static_cast<std::int32_t>(n_) + r, yr);
  }
  for (const std::int32_t j : alpha_.index) {
    if (status_[j] == BasisStatus::Basic || j == q) continue;
    const double a = alpha_.value[j];
    if (a == 0.0) continue;
    d_[j] -= theta_dual * a;
    if (eligible(j, d_[j])) {
      heap_.push_back({std::abs(d_[j]), j});
      std::push_heap(heap_.begin(), heap_.end(), HeapLess{});
    }
  }
  d_[q] = 0.0;
}

Solution Simplex::finish(Status status) {
  Solution solution;
  solution.status = status;
  solution.values = Eigen::VectorXd::Zero(n_);
  for (std::int64_t j = 0; j < n_; ++j) solution.values[j] = x_[j];
  double objective = 0.0;
  for (std::int64_t j = 0; j < n_; ++j) objective += cost_[j] * x_[j];
  solution.objective = status == Status::Optimal ? objective : 0.0;
  solution.basis.variables.assign(status_.begin(), status_.begin() + n_);
  solution.basis.slacks.assign(status_.begin() + n_, status_.end());
  solution.statistics.rows = m_;
  solution.statistics.columns = n_;
  solution.statistics.nonzeros = model_.nonzero_count();
  solution.statistics.iterations = iterations_;
  solution.statistics.refactorizations = refactorizations_;
  solution.statistics.build_seconds = model_.build_seconds();
  return solution;
}

Solution Simplex::run() {
  expand_columns();

  if (m_ == 0) {
    // No constraints: each variable settles at its cost-favorable bound.
    Solution solution;
    solution.status = Status::Optimal;
    solution.values = Eigen::VectorXd::Zero(n_);
    solution.basis.variables.assign(static_cast<std::size_t>(n_), BasisStatus::AtLower);
    solution.statistics.columns = n_;
    solution.statistics.nonzeros = model_.nonzero_count();
    solution.statistics.build_seconds = model_.build_seconds();
    double objective = 0.0;
    for (std::int64_t j = 0; j < n_; ++j) {
      double v;
      if (cost_[j] > options_.optimality_tolerance) {
        if (!std::isfinite(lo_[j])) {
          solution.status = Status::Unbounded;
          return solution;
        }
        v = lo_[j];
      } else if (cost_[j] < -options_.optimality_tolerance) {
        if (!std::isfinite(hi_[j])) {
          solution.status = Status::Unbounded;
          return solution;
        }
        v = hi_[j];
      } else {
        v = std::isfinite(lo_[j]) ? lo_[j] : std::isfinite(hi_[j]) ? hi_[j] : 0.0;
      }
      solution.values[j] = v;
      solution.basis.variables[j] = v == hi_[j] && std::isfinite(hi_[j])
                                        ? BasisStatus::AtUpper
                                        : std::isfinite(lo_[j]) ? BasisStatus::AtLower
                                                                : BasisStatus::FreeAtZero;
      objective += cost_[j] * v;
    }
    solution.objective = objective;
    return solution;
  }

  ColumnSource source;
  source.structural_count = n_;
  source.col_start = col_start_.data();
  source.row_index = row_index_.data();
  source.values = col_value_.data();
  factor_.attach(m_, source);

  // Refactorization cadence: each refactorization does O(rows + nonzeros)
  // work, so the interval grows with the basis; the eta-size budget guards
  // against pathologically fat spikes blowing up the solves in between.
  refactor_interval_ = options_.refactor_interval > 0
                           ? options_.refactor_interval
                           : std::clamp<std::int64_t>(m_ / 64, 100, 3000);
  eta_entry_budget_ = 256 * refactor_interval_;

  w_.resize(m_);
  rho_.resize(m_);
  corr_.resize(m_);
  alpha_.resize(total_);
  dense_tmp_ = Eigen::VectorXd::Zero(m_);
  d_ = Eigen::VectorXd::Zero(total_);

  install_basis();
  initial_values_and_rhs();
  factorize_with_repair();
  recompute_basics();
  recompute_infeasibility();
  recompute_reduced_costs();
  rebuild_heap();

  const std::int64_t max_iterations = options_.max_iterations > 0
                                          ? options_.max_iterations
                                          : 10000 + 40 * (m_ + n_);
  while (true) {
    if (iterations_ > max_iterations) {
      throw SolverError("iteration limit exceeded (" + std::to_string(max_iterations) + ")");
    }
    if (phase1_ && phi_ <= options_.feasibility_tolerance) {
      // The incremental tracker says phase 1 is done: settle it on exact
      // numbers (this re-derives the phase, the costs and the heap).
      refactorize(true);
      confirmed_ = false;
      continue;
    }
    throw_unbounded_flag_ = false;
    const bool stepped = iterate();
    if (throw_unbounded_flag_) {
      if (phase1_) throw SolverError("phase-1 objective reported as unbounded");
      return finish(Status::Unbounded);
    }
    if (stepped) continue;

    // No eligible column under the current (possibly drifted) numbers:
    // recompute everything exactly once before trusting the conclusion.
    if (!confirmed_) {
      if (++confirm_rounds_ > 1000) {
        throw SolverError("optimality confirmation failed to converge");
      }
      refactorize(true);
      confirmed_ = true;
      continue;
    }
    if (phase1_) {
      if (phi_ > options_.feasibility_tolerance) return finish(Status::Infeasible);
      phase1_ = false;
      recompute_infeasibility();
      recompute_reduced_costs();
      rebuild_heap();
      confirmed_ = false;
      continue;
    }
    // Phase 2 priced out on exact numbers: verify primal feasibility.
    double max_violation = 0.0;
    for (std::int64_t p = 0; p < m_; ++p) {
      max_violation = std::max(max_violation, violation(basic_[p]));
    }
    if (max_violation > options_.feasibility_tolerance) {
      recompute_infeasibility();
      recompute_reduced_costs();
      rebuild_heap();
      confirmed_ = false;
      continue;
    }
    return finish(Status::Optimal);
  }
}

}  // namespace

Solution solve(const Model& model, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Simplex simplex(model, options);
  Solution solution = simplex.run();
  const auto end = std::chrono::steady_clock::now();
  solution.statistics.solve_seconds =
      std::chrono::duration<double>(end - start).count();
  return solution;
}

}  // namespace rec::lp
