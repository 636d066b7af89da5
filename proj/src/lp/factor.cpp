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

#include "lp/factor.hpp"

#include <algorithm>
#include <cmath>

namespace rec::lp::internal {
namespace {

// Entries below this magnitude are never accepted as pivots.
constexpr double kPivotFloor = 1e-11;
// Markowitz stability threshold relative to the column maximum.
constexpr double kThreshold = 0.1;
// Candidate columns examined per Markowitz pivot.  A bounded window keeps
// the fallback linear in the rest matrix instead of quadratic; a full pass
// backs it up when the window holds nothing pivotable.
constexpr std::size_t kMarkowitzWindow = 64;

}  // namespace

void BasisFactor::attach(std::int64_t rows, const ColumnSource& source) {
  m_ = rows;
  source_ = source;
  const std::size_t m = static_cast<std::size_t>(rows);
  active_.resize(m);
  row_cols_.resize(m);
  row_count_.assign(m, 0);
  col_alive_.assign(m, 0);
  row_alive_.assign(m, 0);
  work_ = Eigen::VectorXd::Zero(rows);
  mark_.assign(m, 0);
  mark_stamp_ = 0;
  step_of_row_.assign(m, -1);
  step_of_col_.assign(m, -1);
  pivot_row_.assign(m, -1);
  pivot_col_.assign(m, -1);
  dfs_cursor_.assign(m, 0);
  visit_.assign(m, 0);
  visit_stamp_ = 0;
  scratch_.resize(rows);
  eta_rows_.resize(m);
  for (auto& list : eta_rows_) list.clear();
  eta_seen_.clear();
  eta_stamp_ = 0;
}

FactorReport BasisFactor::factorize(const std::vector<std::int32_t>& columns) {
  const std::int32_t m = static_cast<std::int32_t>(m_);

  // Reset the elimination state (vectors keep their capacity).
  for (std::int32_t i = 0; i < m; ++i) {
    active_[i].clear();
    row_cols_[i].clear();
    eta_rows_[i].clear();
    row_count_[i] = 0;
    col_alive_[i] = 1;
    row_alive_[i] = 1;
    step_of_row_[i] = -1;
    step_of_col_[i] = -1;
  }
  eta_seen_.clear();
  l_col_start_.assign(1, 0);
  l_col_index_.clear();
  l_values_.clear();
  u_row_start_.assign(1, 0);
  u_row_index_.clear();
  u_row_values_.clear();
  u_diag_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_value_.clear();
  eta_pivot_.clear();
  eta_pivot_value_.clear();
  col_stack_.clear();
  row_stack_.clear();

  // Load basis columns into the active matrix.
  for (std::int32_t pos = 0; pos < m; ++pos) {
    const std::int32_t id = columns[pos];
    if (id >= source_.structural_count) {
      const std::int32_t r = id - static_cast<std::int32_t>(source_.structural_count);
      active_[pos].push_back({r, 1.0});
      row_count_[r] += 1;
      row_cols_[r].push_back(pos);
    } else {
      for (std::int64_t p = source_.col_start[id]; p < source_.col_start[id + 1]; ++p) {
        const std::int32_t r = source_.row_index[p];
        active_[pos].push_back({r, source_.values[p]});
        row_count_[r] += 1;
        row_cols_[r].push_back(pos);
      }
    }
  }
  for (std::int32_t pos = 0; pos < m; ++pos) {
    if (active_[pos].size() == 1) col_stack_.push_back(pos);
  }
  for (std::int32_t r = 0; r < m; ++r) {
    if (row_count_[r] == 1) row_stack_.push_back(r);
  }

  FactorReport report;
  std::int32_t pivoted = 0;
  bool rest_built = false;  // Markowitz candidate list, built on first use
  std::vector<Entry> l_entries;  // scratch for the current pivot column

  while (pivoted < m) {
    std::int32_t prow = -1;
    std::int32_t pcol = -1;
    double pval = 0.0;

    // 1) Column singletons: pivot with no update and an empty L column.
    while (!col_stack_.empty() && pcol < 0) {
      const std::int32_t pos = col_stack_.back();
      col_stack_.pop_back();
      if (!col_alive_[pos] || active_[pos].size() != 1) continue;
      const Entry e = active_[pos][0];
      if (std::abs(e.value) < kPivotFloor) {
        // Numerically empty column: fail it and keep the row available.
        row_count_[e.row] -= 1;
        if (row_count_[e.row] == 1) row_stack_.push_back(e.row);
        active_[pos].clear();
        col_alive_[pos] = 0;
        report.failed_positions.push_back(pos);
        continue;
      }
      prow = e.row;
      pcol = pos;
      pval = e.value;
    }

    // 2) Row singletons: pivot with an empty U row and no update.
    while (pcol < 0 && !row_stack_.empty()) {
      const std::int32_t r = row_stack_.back();
      row_stack_.pop_back();
      if (!row_alive_[r] || row_count_[r] != 1) continue;
      for (const std::int32_t pos : row_cols_[r]) {
        if (!col_alive_[pos]) continue;
        for (const Entry& e : active_[pos]) {
          if (e.row == r) {
            if (std::abs(e.value) >= kPivotFloor) {
              prow = r;
              pcol = pos;
              pval = e.value;
            }
            break;
          }
        }
        if (pcol >= 0) break;
      }
      if (pcol < 0) break;  // the lone entry is tiny; leave it to Markowitz
    }

    // 3) Markowitz fallback with threshold pivoting (rare on settlement
    //    bases, which triangularize through the singleton queues).  Dead
    //    columns are swept out of the candidate list lazily; selection
    //    looks at a bounded window so the whole fallback stays linear in
    //    the rest matrix.
    if (pcol < 0) {
      if (!rest_built) {
        rest_cols_.clear();
        for (std::int32_t pos = 0; pos < m; ++pos) {
          if (col_alive_[pos] && !active_[pos].empty()) rest_cols_.push_back(pos);
        }
        rest_built = true;
      }
      std::int64_t best_score = -1;
      const auto consider = [&](std::int32_t pos) {
        const std::vector<Entry>& col = active_[pos];
        double colmax = 0.0;
        for (const Entry& e : col) colmax = std::max(colmax, std::abs(e.value));
        if (colmax < kPivotFloor) return;
        const double accept = std::max(kThreshold * colmax, kPivotFloor);
        for (const Entry& e : col) {
          if (std::abs(e.value) < accept) continue;
          const std::int64_t score =
              static_cast<std::int64_t>(row_count_[e.row] - 1) *
              static_cast<std::int64_t>(col.size() - 1);
          const bool better =
              best_score < 0 || score < best_score ||
              (score == best_score && (pos < pcol || (pos == pcol && e.row < prow)));
          if (better) {
            best_score = score;
            prow = e.row;
            pcol = pos;
            pval = e.value;
          }
        }
      };
      std::size_t idx = 0;
      std::size_t scanned = 0;
      while (idx < rest_cols_.size() && scanned < kMarkowitzWindow) {
        const std::int32_t pos = rest_cols_[idx];
        if (!col_alive_[pos] || active_[pos].empty()) {
          rest_cols_[idx] = rest_cols_.back();
          rest_cols_.pop_back();
          continue;
        }
        consider(pos);
        ++scanned;
        ++idx;
      }
      if (pcol < 0) {
        // Nothing pivotable in the window; sweep the remaining columns.
        while (idx < rest_cols_.size()) {
          const std::int32_t pos = rest_cols_[idx];
          if (!col_alive_[pos] || active_[pos].empty()) {
            rest_cols_[idx] = rest_cols_.back();
            rest_cols_.pop_back();
            continue;
          }
          consider(pos);
          ++idx;
        }
      }
      if (pcol < 0) break;  // nothing pivotable is left
    }

    // --- Execute the pivot at (prow, pcol). ---
    const std::int32_t k = pivoted;
    pivot_row_[k] = prow;
    pivot_col_[k] = pcol;
    step_of_row_[prow] = k;
    step_of_col_[pcol] = k;

    // L column: remaining entries of the pivot column, scaled.
    l_entries.clear();
    for (const Entry& e : active_[pcol]) {
      if (e.row == prow) continue;
      l_entries.push_back({e.row, e.value / pval});
      row_count_[e.row] -= 1;
      if (row_count_[e.row] == 1) row_stack_.push_back(e.row);
    }
    active_[pcol].clear();
    col_alive_[pcol] = 0;

    // U row: extract the pivot row from the other alive columns.
    pivot_row_entries_.clear();
    for (const std::int32_t pos : row_cols_[prow]) {
      if (!col_alive_[pos]) continue;
      std::vector<Entry>& col = active_[pos];
      for (std::size_t s = 0; s < col.size(); ++s) {
        if (col[s].row == prow) {
          pivot_row_entries_.push_back({pos, col[s].value});
          col[s] = col.back();
          col.pop_back();
          break;
        }
      }
    }
    row_alive_[prow] = 0;
    row_count_[prow] = 0;

    // Rank-1 update of the remaining active submatrix (fill-in possible).
    if (!l_entries.empty() && !pivot_row_entries_.empty()) {
      for (const Entry& ue : pivot_row_entries_) {
        const std::int32_t pos = ue.row;  // here Entry.row carries a position
        const double u = ue.value;
        std::vector<Entry>& col = active_[pos];
        ++mark_stamp_;
        for (const Entry& e : col) {
          mark_[e.row] = mark_stamp_;
          work_[e.row] = e.value;
        }
        for (const Entry& le : l_entries) {
          const double delta = -le.value * u;
          if (mark_[le.row] == mark_stamp_) {
            work_[le.row] += delta;
          } else {
            mark_[le.row] = mark_stamp_;
            work_[le.row] = delta;
            col.push_back({le.row, 0.0});
            row_count_[le.row] += 1;
            row_cols_[le.row].push_back(pos);
          }
        }
        for (Entry& e : col) e.value = work_[e.row];
      }
    }
    for (const Entry& ue : pivot_row_entries_) {
      if (col_alive_[ue.row] && active_[ue.row].size() == 1) col_stack_.push_back(ue.row);
    }

    // Store the factors for this step.
    for (const Entry& le : l_entries) {
      l_col_index_.push_back(le.row);  // original row ids; mapped to steps below
      l_values_.push_back(le.value);
    }
    l_col_start_.push_back(static_cast<std::int64_t>(l_col_index_.size()));
    for (const Entry& ue : pivot_row_entries_) {
      u_row_index_.push_back(ue.row);  // basis positions; mapped to steps below
      u_row_values_.push_back(ue.value);
    }
    u_row_start_.push_back(static_cast<std::int64_t>(u_row_index_.size()));
    u_diag_.push_back(pval);
    ++pivoted;
  }

  if (pivoted < m) {
    for (std::int32_t pos = 0; pos < m; ++pos) {
      if (col_alive_[pos]) report.failed_positions.push_back(pos);
    }
    std::sort(report.failed_positions.begin(), report.failed_positions.end());
    report.failed_positions.erase(
        std::unique(report.failed_positions.begin(), report.failed_positions.end()),
        report.failed_positions.end());
    for (std::int32_t r = 0; r < m; ++r) {
      if (row_alive_[r]) report.free_rows.push_back(r);
    }
    return report;
  }
  if (!report.failed_positions.empty()) {
    // All rows were pivoted yet some columns failed earlier; still singular.
    for (std::int32_t r = 0; r < m; ++r) {
      if (row_alive_[r]) report.free_rows.push_back(r);
    }
    return report;
  }

  // Map stored indices from row/position space into pivot-step space.
  for (std::int32_t& idx : l_col_index_) idx = step_of_row_[idx];
  for (std::int32_t& idx : u_row_index_) idx = step_of_col_[idx];

  // Transposes for the opposite solve directions (counting sort, O(nnz)).
  const auto transpose = [m](const std::vector<std::int64_t>& ap,
                             const std::vector<std::int32_t>& ai,
                             const std::vector<double>& ax, std::vector<std::int64_t>& bp,
                             std::vector<std::int32_t>& bi, std::vector<double>& bx) {
    bp.assign(static_cast<std::size_t>(m) + 1, 0);
    for (const std::int32_t i : ai) bp[static_cast<std::size_t>(i) + 1] += 1;
    for (std::int32_t i = 0; i < m; ++i) bp[i + 1] += bp[i];
    bi.resize(ai.size());
    bx.resize(ax.size());
    std::vector<std::int64_t> next(bp.begin(), bp.end() - 1);
    for (std::int32_t j = 0; j < m; ++j) {
      for (std::int64_t p = ap[j]; p < ap[j + 1]; ++p) {
        const std::int64_t q = next[ai[p]]++;
        bi[q] = j;
        bx[q] = ax[p];
      }
    }
  };
  transpose(l_col_start_, l_col_index_, l_values_, l_row_start_, l_row_index_, l_row_values_);
  transpose(u_row_start_, u_row_index_, u_row_values_, u_col_start_, u_col_index_, u_values_);
  return report;
}

void BasisFactor::reach(const std::vector<std::int64_t>& gp,
                        const std::vector<std::int32_t>& gi,
                        const std::vector<std::int32_t>& seeds,
                        std::vector<std::int32_t>& order) const {
  order.clear();
  ++visit_stamp_;
  for (const std::int32_t s : seeds) {
    if (visit_[s] == visit_stamp_) continue;
    visit_[s] = visit_stamp_;
    dfs_cursor_[s] = gp[s];
    dfs_stack_.clear();
    dfs_stack_.push_back(s);
    while (!dfs_stack_.empty()) {
      const std::int32_t j = dfs_stack_.back();
      if (dfs_cursor_[j] < gp[static_cast<std::size_t>(j) + 1]) {
        const std::int32_t child = gi[dfs_cursor_[j]++];
        if (visit_[child] != visit_stamp_) {
          visit_[child] = visit_stamp_;
          dfs_cursor_[child] = gp[child];
          dfs_stack_.push_back(child);
        }
      } else {
        dfs_stack_.pop_back();
        order.push_back(j);  // postorder
      }
    }
  }
}

void BasisFactor::lower_solve(SparseVector& x) const {
  reach(l_col_start_, l_col_index_, x.index, topo_);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const std::int32_t j = *it;
    const double xj = x.value[j];
    if (xj == 0.0) continue;
    for (std::int64_t p = l_col_start_[j]; p < l_col_start_[j + 1]; ++p) {
      x.add(l_col_index_[p], -l_values_[p] * xj);
    }
  }
}

void BasisFactor::upper_solve(SparseVector& x) const {
  reach(u_col_start_, u_col_index_, x.index, topo_);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const std::int32_t j = *it;
    const double v = x.value[j];
    if (v == 0.0) continue;
    const double xj = v / u_diag_[j];
    x.value[j] = xj;
    for (std::int64_t p = u_col_start_[j]; p < u_col_start_[j + 1]; ++p) {
      x.add(u_col_index_[p], -u_values_[p] * xj);
    }
  }
}

void BasisFactor::upper_t_solve(SparseVector& x) const {
  reach(u_row_start_, u_row_index_, x.index, topo_);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const std::int32_t j = *it;
    const double v = x.value[j];
    if (v == 0.0) continue;
    const double xj = v / u_diag_[j];
    x.value[j] = xj;
    for (std::int64_t p = u_row_start_[j]; p < u_row_start_[j + 1]; ++p) {
      x.add(u_row_index_[p], -u_row_values_[p] * xj);
    }
  }
}

void BasisFactor::lower_t_solve(SparseVector& x) const {
  reach(l_row_start_, l_row_index_, x.index, topo_);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    const std::int32_t j = *it;
    const double xj = x.value[j];
    if (xj == 0.0) continue;
    for (std::int64_t p = l_row_start_[j]; p < l_row_start_[j + 1]; ++p) {
      x.add(l_row_index_[p], -l_row_values_[p] * xj);
    }
  }
}

void BasisFactor::ftran(SparseVector& x) {
  scratch_.clear();
  for (const std::int32_t r : x.index) {
    if (x.value[r] != 0.0) scratch_.set(step_of_row_[r], x.value[r]);
  }
  std::swap(x.value, scratch_.value);
  std::swap(x.index, scratch_.index);
  std::swap(x.mask, scratch_.mask);
  lower_solve(x);
  upper_solve(x);
  scratch_.clear();
  for (const std::int32_t k : x.index) {
    if (x.value[k] != 0.0) scratch_.set(pivot_col_[k], x.value[k]);
  }
  std::swap(x.value, scratch_.value);
  std::swap(x.index, scratch_.index);
  std::swap(x.mask, scratch_.mask);
  apply_etas_ftran(x);
}

void BasisFactor::btran(SparseVector& x) {
  apply_etas_btran(x);
  scratch_.clear();
  for (const std::int32_t p : x.index) {
    if (x.value[p] != 0.0) scratch_.set(step_of_col_[p], x.value[p]);
  }
  std::swap(x.value, scratch_.value);
  std::swap(x.index, scratch_.index);
  std::swap(x.mask, scratch_.mask);
  upper_t_solve(x);
  lower_t_solve(x);
  scratch_.clear();
  for (const std::int32_t k : x.index) {
    if (x.value[k] != 0.0) scratch_.set(pivot_row_[k], x.value[k]);
  }
  std::swap(x.value, scratch_.value);
  std::swap(x.index, scratch_.index);
  std::swap(x.mask, scratch_.mask);
}

void BasisFactor::ftran_dense(Eigen::VectorXd& x) {
  Eigen::VectorXd& tmp = work_;
  for (std::int32_t r = 0; r < m_; ++r) tmp[step_of_row_[r]] = x[r];
  for (std::int32_t k = 0; k < m_; ++k) {
    const double v = tmp[k];
    if (v == 0.0) continue;
    for (std::int64_t p = l_col_start_[k]; p < l_col_start_[k + 1]; ++p) {
      tmp[l_col_index_[p]] -= l_values_[p] * v;
    }
  }
  for (std::int32_t k = static_cast<std::int32_t>(m_) - 1; k >= 0; --k) {
    const double v = tmp[k];
    if (v == 0.0) continue;
    const double xk = v / u_diag_[k];
    tmp[k] = xk;
    for (std::int64_t p = u_col_start_[k]; p < u_col_start_[k + 1]; ++p) {
      tmp[u_col_index_[p]] -= u_values_[p] * xk;
    }
  }
  for (std::int32_t k = 0; k < m_; ++k) x[pivot_col_[k]] = tmp[k];
  for (std::size_t e = 0; e < eta_pivot_.size(); ++e) {
    const std::int32_t p = eta_pivot_[e];
    const double xp = x[p];
    if (xp == 0.0) continue;
    const double zp = xp / eta_pivot_value_[e];
    x[p] = zp;
    for (std::int64_t q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      x[eta_index_[q]] -= eta_value_[q] * zp;
    }
  }
}

void BasisFactor::btran_dense(Eigen::VectorXd& x) {
  for (std::size_t e = eta_pivot_.size(); e-- > 0;) {
    const std::int32_t p = eta_pivot_[e];
    double dot = 0.0;
    for (std::int64_t q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      dot += eta_value_[q] * x[eta_index_[q]];
    }
    x[p] = (x[p] - dot) / eta_pivot_value_[e];
  }
  Eigen::VectorXd& tmp = work_;
  for (std::int32_t p = 0; p < m_; ++p) tmp[step_of_col_[p]] = x[p];
  for (std::int32_t k = 0; k < m_; ++k) {
    const double v = tmp[k];
    if (v == 0.0) continue;
    const double xk = v / u_diag_[k];
    tmp[k] = xk;
    for (std::int64_t p = u_row_start_[k]; p < u_row_start_[k + 1]; ++p) {
      tmp[u_row_index_[p]] -= u_row_values_[p] * xk;
    }
  }
  for (std::int32_t k = static_cast<std::int32_t>(m_) - 1; k >= 0; --k) {
    const double v = tmp[k];
    if (v == 0.0) continue;
    for (std::int64_t p = l_row_start_[k]; p < l_row_start_[k + 1]; ++p) {
      tmp[l_row_index_[p]] -= l_row_values_[p] * v;
    }
  }
  for (std::int32_t k = 0; k < m_; ++k) x[pivot_row_[k]] = tmp[k];
}

void BasisFactor::push_eta(const SparseVector& spike, std::int32_t p) {
  const std::int32_t id = static_cast<std::int32_t>(eta_pivot_.size());
  for (const std::int32_t i : spike.index) {
    if (i == p || spike.value[i] == 0.0) continue;
    eta_index_.push_back(i);
    eta_value_.push_back(spike.value[i]);
    eta_rows_[i].push_back(id);
  }
  eta_start_.push_back(static_cast<std::int64_t>(eta_index_.size()));
  eta_pivot_.push_back(p);
  eta_pivot_value_.push_back(spike.value[p]);
  eta_rows_[p].push_back(id);
  eta_seen_.push_back(0);
}

void BasisFactor::apply_etas_ftran(SparseVector& x) const {
  for (std::size_t e = 0; e < eta_pivot_.size(); ++e) {
    const std::int32_t p = eta_pivot_[e];
    const double xp = x.value[p];
    if (xp == 0.0) continue;
    const double zp = xp / eta_pivot_value_[e];
    x.set(p, zp);
    for (std::int64_t q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      x.add(eta_index_[q], -eta_value_[q] * zp);
    }
  }
}

void BasisFactor::apply_etas_btran(SparseVector& x) const {
  if (eta_pivot_.empty()) return;
  // The etas apply in reverse order, but only those whose pattern meets the
  // (growing) support of x can change anything.  Candidates are discovered
  // through the inverted index: the initial support seeds them, and each
  // applied eta extends the support by its pivot row alone, which can only
  // wake etas that are still pending (lower ids).
  ++eta_stamp_;
  eta_heap_.clear();
  const auto wake = [this](std::int32_t row, std::int32_t below) {
    for (const std::int32_t e : eta_rows_[row]) {
      if (e >= below || eta_seen_[e] == eta_stamp_) continue;
      eta_seen_[e] = eta_stamp_;
      eta_heap_.push_back(e);
      std::push_heap(eta_heap_.begin(), eta_heap_.end());
    }
  };
  const std::int32_t count = static_cast<std::int32_t>(eta_pivot_.size());
  for (const std::int32_t r : x.index) {
    if (x.value[r] != 0.0) wake(r, count);
  }
  while (!eta_heap_.empty()) {
    std::pop_heap(eta_heap_.begin(), eta_heap_.end());
    const std::int32_t e = eta_heap_.back();
    eta_heap_.pop_back();
    const std::int32_t p = eta_pivot_[e];
    double dot = 0.0;
    for (std::int64_t q = eta_start_[e]; q < eta_start_[e + 1]; ++q) {
      dot += eta_value_[q] * x.value[eta_index_[q]];
    }
    const double xp = x.value[p];
    if (xp == 0.0 && dot == 0.0) continue;
    const double z = (xp - dot) / eta_pivot_value_[e];
    x.set(p, z);
    if (z != 0.0) wake(p, e);
  }
}

}  // namespace rec::lp::internal
