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

#include "rec/lp/model.hpp"

#include <cmath>

namespace rec::lp {

std::size_t Model::check_var(Variable v) const {
  if (v.id < 0 || static_cast<std::size_t>(v.id) >= cost_.size()) {
    throw ModelError("variable handle " + std::to_string(v.id) + " is not declared");
  }
  return static_cast<std::size_t>(v.id);
}

Variable Model::add_variable(std::string name, double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || !(lower <= upper)) {
    throw ModelError("variable '" + name + "' has contradictory bounds [" +
                     std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
  if (!std::isfinite(cost)) {
    throw ModelError("variable '" + name + "' has a non-finite cost");
  }
  Variable v{static_cast<std::int32_t>(cost_.size())};
  names_.push_back(std::move(name));
  lower_.push_back(lower);
  upper_.push_back(upper);
  cost_.push_back(cost);
  stamp_.push_back(0);
  return v;
}

Row Model::add_constraint(std::span<const Term> terms, Relation relation, double rhs) {
  if (terms.empty()) {
    throw ModelError("constraint rows must not be empty");
  }
  if (!std::isfinite(rhs)) {
    throw ModelError("constraint right-hand side must be finite");
  }
  ++stamp_counter_;
  for (const Term& term : terms) {
    const std::size_t j = check_var(term.var);
    if (!std::isfinite(term.coeff)) {
      throw ModelError("constraint coefficient on '" + names_[j] + "' is not finite");
    }
    if (stamp_[j] == stamp_counter_) {
      throw ModelError("variable '" + names_[j] + "' appears twice in one row");
    }
    stamp_[j] = stamp_counter_;
  }
  for (const Term& term : terms) {
    if (term.coeff != 0.0) {  // structural zeros are dropped
      column_index_.push_back(term.var.id);
      values_.push_back(term.coeff);
    }
  }
  row_start_.push_back(static_cast<std::int64_t>(column_index_.size()));
  relations_.push_back(relation);
  rhs_.push_back(rhs);
  return Row{static_cast<std::int32_t>(rhs_.size() - 1)};
}

Row Model::add_constraint(std::initializer_list<Term> terms, Relation relation, double rhs) {
  return add_constraint(std::span<const Term>(terms.begin(), terms.size()), relation, rhs);
}

void Model::set_variable_bounds(Variable v, double lower, double upper) {
  const std::size_t j = check_var(v);
  if (std::isnan(lower) || std::isnan(upper) || !(lower <= upper)) {
    throw ModelError("variable '" + names_[j] + "' has contradictory bounds [" +
                     std::to_string(lower) + ", " + std::to_string(upper) + "]");
  }
  lower_[j] = lower;
  upper_[j] = upper;
}

void Model::set_cost(Variable v, double cost) {
  const std::size_t j = check_var(v);
  if (!std::isfinite(cost)) {
    throw ModelError("variable '" + names_[j] + "' has a non-finite cost");
  }
  cost_[j] = cost;
}

void Model::set_rhs(Row r, double rhs) {
  if (r.id < 0 || static_cast<std::size_t>(r.id) >= rhs_.size()) {
    throw ModelError("row handle " + std::to_string(r.id) + " is not declared");
  }
  if (!std::isfinite(rhs)) {
    throw ModelError("constraint right-hand side must be finite");
  }
  rhs_[static_cast<std::size_t>(r.id)] = rhs;
}

}  // namespace rec::lp
