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

#ifndef RECSETTLE_LP_MODEL_HPP_
#define RECSETTLE_LP_MODEL_HPP_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rec/common.hpp"

namespace rec::lp {

// Opaque handle to a declared variable; stable for the model's lifetime.
struct Variable {
  std::int32_t id = -1;
  explicit operator bool() const { return id >= 0; }
};

// Opaque handle to a constraint row.
struct Row {
  std::int32_t id = -1;
};

enum class Relation : std::uint8_t { LessEqual, Equal, GreaterEqual };

// One coefficient of a constraint row.
struct Term {
  Variable var;
  double coeff = 0.0;
};

// A sparse minimization LP over individually bounded variables:
//
//   minimize    c'x
//   subject to  row_i . x  (<= | = | >=)  rhs_i
//               lo_j <= x_j <= hi_j
//
// Rows are stored compressed as they arrive; the solver derives its own
// column-wise view.  Construction is single-writer; solving never mutates
// the model, so distinct models can be solved concurrently.
class Model {
 public:
  // Declares a variable.  Bounds may be +/-infinity; lo <= hi is required
  // and the cost must be finite.
  Variable add_variable(std::string name, double lower, double upper, double cost);

  // Appends a constraint.  The row must be nonempty, reference each variable
  // at most once, and carry finite coefficients and right-hand side.
  Row add_constraint(std::span<const Term> terms, Relation relation, double rhs);
  Row add_constraint(std::initializer_list<Term> terms, Relation relation, double rhs);

  // Bound and cost adjustment (used by warm-started re-solves; the sparsity
  // pattern is immutable once rows exist).
  void set_variable_bounds(Variable v, double lower, double upper);
  void set_cost(Variable v, double cost);
  void set_rhs(Row r, double rhs);

  std::int64_t variable_count() const { return static_cast<std::int64_t>(cost_.size()); }
  std::int64_t row_count() const { return static_cast<std::int64_t>(rhs_.size()); }
  std::int64_t nonzero_count() const { return static_cast<std::int64_t>(values_.size()); }

  const std::string& variable_name(Variable v) const { return names_[check_var(v)]; }
  double lower_bound(Variable v) const { return lower_[check_var(v)]; }
  double upper_bound(Variable v) const { return upper_[check_var(v)]; }
  double cost(Variable v) const { return cost_[check_var(v)]; }

  // Raw storage accessors for the solver and the MPS writer.
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& costs() const { return cost_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::int64_t>& row_start() const { return row_start_; }
  const std::vector<std::int32_t>& column_index() const { return column_index_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<double>& rhs() const { return rhs_; }

  // Wall-clock seconds spent assembling this model, reported alongside the
  // solver statistics (set by the builder, not measured here).
  void set_build_seconds(double s) { build_seconds_ = s; }
  double build_seconds() const { return build_seconds_; }

 private:
  std::size_t check_var(Variable v) const;

  std::vector<std::string> names_;
  std::vector<double> lower_, upper_, cost_;

  // Rows, compressed sparse row.
  std::vector<std::int64_t> row_start_{0};
  std::vector<std::int32_t> column_index_;
  std::vector<double> values_;
  std::vector<Relation> relations_;
  std::vector<double> rhs_;

  // Scratch stamp per variable detecting duplicate terms within one row.
  std::vector<std::int32_t> stamp_;
  std::int32_t stamp_counter_ = 0;

  double build_seconds_ = 0.0;
};

}  // namespace rec::lp

#endif  // RECSETTLE_LP_MODEL_HPP_
