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

#ifndef RECSETTLE_LP_FACTOR_HPP_
#define RECSETTLE_LP_FACTOR_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace rec::lp::internal {

// Sparse working vector: dense values plus an explicit nonzero index list,
// so clearing costs O(nnz) instead of O(m).
struct SparseVector {
  Eigen::VectorXd value;
  std::vector<std::int32_t> index;
  std::vector<std::uint8_t> mask;

  void resize(std::int64_t n) {
    value = Eigen::VectorXd::Zero(n);
    mask.assign(static_cast<std::size_t>(n), 0);
    index.clear();
  }

  void clear() {
    for (std::int32_t i : index) {
      value[i] = 0.0;
      mask[static_cast<std::size_t>(i)] = 0;
    }
    index.clear();
  }

  // Adds 'x' at position i, extending the pattern when needed.
  void add(std::int32_t i, double x) {
    if (!mask[static_cast<std::size_t>(i)]) {
      mask[static_cast<std::size_t>(i)] = 1;
      index.push_back(i);
    }
    value[i] += x;
  }

  void set(std::int32_t i, double x) {
    if (!mask[static_cast<std::size_t>(i)]) {
      mask[static_cast<std::size_t>(i)] = 1;
      index.push_back(i);
    }
    value[i] = x;
  }

  bool contains(std::int32_t i) const { return mask[static_cast<std::size_t>(i)] != 0; }
};

// Read-only column view of the constraint matrix [A | I] used by the
// factorization: structural columns come from the model's CSC arrays, the
// slack column for row r is the unit vector e_r.
struct ColumnSource {
  std::int64_t structural_count = 0;
  const std::int64_t* col_start = nullptr;
  const std::int32_t* row_index = nullptr;
  const double* values = nullptr;
};

// Result of a factorization attempt.  On partial success (structurally or
// numerically singular basis) `failed_positions` lists basis slots that
// could not be pivoted and `free_rows` the rows left uncovered; the caller
// patches the basis (slack replacement) and retries.
struct FactorReport {
  std::vector<std::int32_t> failed_positions;
  std::vector<std::int32_t> free_rows;

  bool ok() const { return failed_positions.empty(); }
};

// LU factorization of a simplex basis with Markowitz pivoting (singleton
// queues first, threshold 0.1), plus a product-form eta file for cheap
// basis updates between refactorizations.  Triangular solves take sparse
// right-hand sides and exploit the nonzero pattern via depth-first
// reachability, so their cost scales with the size of the result rather
// than with the basis dimension.
class BasisFactor {
 public:
  void attach(std::int64_t rows, const ColumnSource& source);

  // Factorizes the basis given by `columns` (size m; structural id j in
  // [0,n), slack id n+r).  Discards any existing eta file.
  FactorReport factorize(const std::vector<std::int32_t>& columns);

  // x := B^-1 x.  Input pattern in row space, output in basis-position
  // space (entry p pairs with the p-th basis column).
  void ftran(SparseVector& x);

  // x := B^-T x.  Input pattern in basis-position space, output in row
  // space (the usual pricing direction).
  void btran(SparseVector& x);

  // Dense variants used for the periodic exact recomputation of the basic
  // values and reduced costs.
  void ftran_dense(Eigen::VectorXd& x);
  void btran_dense(Eigen::VectorXd& x);

  // Appends an eta replacing basis position p; `spike` is B^-1 a_q with the
  // pivot element at position p.
  void push_eta(const SparseVector& spike, std::int32_t p);

  int eta_count() const { return static_cast<int>(eta_pivot_.size()); }
  std::int64_t factor_nonzeros() const {
    return static_cast<std::int64_t>(l_values_.size() + u_values_.size());
  }
  // Size of the eta file including pivot entries; every btran scans it in
  // full, so the solver refactorizes once this outgrows its budget.
  std::int64_t eta_entries() const {
    return static_cast<std::int64_t>(eta_index_.size() + eta_pivot_.size());
  }

 private:
  void apply_etas_ftran(SparseVector& x) const;
  void apply_etas_btran(SparseVector& x) const;
  void lower_solve(SparseVector& x) const;   // L z = x (step space)
  void upper_solve(SparseVector& x) const;   // U z = x (step space)
  void lower_t_solve(SparseVector& x) const; // L' z = x
  void upper_t_solve(SparseVector& x) const; // U' z = x
  void reach(const std::vector<std::int64_t>& gp, const std::vector<std::int32_t>& gi,
             const std::vector<std::int32_t>& seeds, std::vector<std::int32_t>& order) const;

  std::int64_t m_ = 0;
  ColumnSource source_;

  // Elimination workspace (reused across factorizations).
  struct Entry {
    std::int32_t row;
    double value;
  };
  std::vector<std::vector<Entry>> active_;          // per basis position
  std::vector<std::vector<std::int32_t>> row_cols_; // positions touching a row
  std::vector<std::int32_t> row_count_;
  std::vector<std::uint8_t> col_alive_, row_alive_;
  std::vector<std::int32_t> col_stack_, row_stack_;
  std::vector<std::int32_t> rest_cols_;  // alive columns for Markowitz pivots
  Eigen::VectorXd work_;
  std::vector<std::int32_t> mark_;
  std::int32_t mark_stamp_ = 0;

  // Factors in pivot-step space.  L is unit lower triangular (diagonal
  // implicit), U carries its diagonal separately.
  std::vector<std::int64_t> l_col_start_, l_row_start_;
  std::vector<std::int32_t> l_col_index_, l_row_index_;
  std::vector<double> l_values_, l_row_values_;
  std::vector<std::int64_t> u_col_start_, u_row_start_;
  std::vector<std::int32_t> u_col_index_, u_row_index_;
  std::vector<double> u_values_, u_row_values_;
  std::vector<double> u_diag_;
  std::vector<std::int32_t> pivot_row_, pivot_col_;      // step -> row / position
  std::vector<std::int32_t> step_of_row_, step_of_col_;  // inverse maps

  // Scratch for pivot-row extraction and triangular solves.
  std::vector<Entry> pivot_row_entries_;
  mutable std::vector<std::int32_t> dfs_stack_, topo_;
  mutable std::vector<std::int64_t> dfs_cursor_;
  mutable std::vector<std::int32_t> visit_;
  mutable std::int32_t visit_stamp_ = 0;
  mutable SparseVector scratch_;

  // Eta file (product-form update).
  std::vector<std::int64_t> eta_start_{0};
  std::vector<std::int32_t> eta_index_;
  std::vector<double> eta_value_;
  std::vector<std::int32_t> eta_pivot_;
  std::vector<double> eta_pivot_value_;

  // Inverted eta index: per row, the etas whose pattern (pivot included)
  // touches it.  Lets the transposed solve visit only the etas that can
  // interact with a sparse right-hand side instead of the whole file.
  std::vector<std::vector<std::int32_t>> eta_rows_;
  mutable std::vector<std::int64_t> eta_seen_;   // per eta, last btran stamp
  mutable std::vector<std::int32_t> eta_heap_;   // candidate ids, max-heap
  mutable std::int64_t eta_stamp_ = 0;
};

}  // namespace rec::lp::internal

#endif  // RECSETTLE_LP_FACTOR_HPP_
