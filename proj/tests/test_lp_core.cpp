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

#include <doctest.h>

#include <Eigen/Dense>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "lp/factor.hpp"
#include "rec/common.hpp"
#include "rec/lp/model.hpp"
#include "rec/lp/mps.hpp"
#include "rec/lp/solver.hpp"
#include "support/instances.hpp"
#include "support/vertex_oracle.hpp"

namespace {

using doctest::Contains;
namespace lp = rec::lp;
namespace lpi = rec::lp::internal;

// Columns of [A | I] in compressed form, the layout BasisFactor consumes.
struct CscFixture {
  std::int64_t rows = 0;
  std::int64_t structural = 0;
  std::vector<std::int64_t> start{0};
  std::vector<std::int32_t> row;
  std::vector<double> value;

  static CscFixture from_dense(const Eigen::MatrixXd& a) {
    CscFixture f;
    f.rows = a.rows();
    f.structural = a.cols();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (a(i, j) != 0.0) {
          f.row.push_back(static_cast<std::int32_t>(i));
          f.value.push_back(a(i, j));
        }
      }
      f.start.push_back(static_cast<std::int64_t>(f.row.size()));
    }
    return f;
  }

  lpi::ColumnSource source() const {
    lpi::ColumnSource s;
    s.structural_count = structural;
    s.col_start = start.data();
    s.row_index = row.data();
    s.values = value.data();
    return s;
  }

  Eigen::VectorXd dense_column(std::int32_t id) const {
    Eigen::VectorXd column = Eigen::VectorXd::Zero(rows);
    if (id < structural) {
      for (std::int64_t p = start[id]; p < start[id + 1]; ++p) {
        column[this->row[static_cast<std::size_t>(p)]] = value[static_cast<std::size_t>(p)];
      }
    } else {
      column[id - structural] = 1.0;
    }
    return column;
  }

  Eigen::MatrixXd basis_matrix(const std::vector<std::int32_t>& columns) const {
    Eigen::MatrixXd basis(rows, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t p = 0; p < columns.size(); ++p) {
      basis.col(static_cast<Eigen::Index>(p)) = dense_column(columns[p]);
    }
    return basis;
  }
};

// The sparse kernels must keep value[i] == 0 exactly for i outside the pattern.
void check_pattern_consistency(const lpi::SparseVector& x) {
  for (Eigen::Index i = 0; i < x.value.size(); ++i) {
    if (x.value[i] != 0.0) {
      CHECK(x.contains(static_cast<std::int32_t>(i)));
    }
  }
}

Eigen::MatrixXd diagonally_dominant(std::mt19937_64& rng, Eigen::Index m, Eigen::Index n) {
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      const double draw = rec::testsupport::uniform(rng, -1.0, 1.0);
      a(i, j) = std::abs(draw) < 0.35 ? 0.0 : draw;  // keep it sparse-ish
    }
    if (j < m) a(j, j) += static_cast<double>(m);
  }
  return a;
}

// Checks an optimal solution against the model's bounds and rows.
void check_solution_feasible(const lp::Model& model, const lp::Solution& solution,
                             double tolerance) {
  REQUIRE(solution.values.size() == model.variable_count());
  for (std::int64_t j = 0; j < model.variable_count(); ++j) {
    CHECK(solution.values[j] >= model.lower()[j] - tolerance);
    CHECK(solution.values[j] <= model.upper()[j] + tolerance);
  }
  for (std::int64_t r = 0; r < model.row_count(); ++r) {
    double activity = 0.0;
    for (std::int64_t p = model.row_start()[r]; p < model.row_start()[r + 1]; ++p) {
      activity += model.values()[p] * solution.values[model.column_index()[p]];
    }
    switch (model.relations()[r]) {
      case lp::Relation::LessEqual:
        CHECK(activity <= model.rhs()[r] + tolerance);
        break;
      case lp::Relation::GreaterEqual:
        CHECK(activity >= model.rhs()[r] - tolerance);
        break;
      case lp::Relation::Equal:
        CHECK(std::abs(activity - model.rhs()[r]) <= tolerance);
        break;
    }
  }
}

}  // namespace

TEST_SUITE("lp_factor") {
  TEST_CASE("an all-slack basis acts as the identity") {
    std::mt19937_64 rng(7);
    const CscFixture fixture = CscFixture::from_dense(diagonally_dominant(rng, 5, 3));
    lpi::BasisFactor factor;
    factor.attach(fixture.rows, fixture.source());
    std::vector<std::int32_t> columns;
    for (std::int32_t r = 0; r < 5; ++r) {
      columns.push_back(static_cast<std::int32_t>(fixture.structural) + r);
    }
    REQUIRE(factor.factorize(columns).ok());

    lpi::SparseVector x;
    x.resize(5);
    x.set(1, 2.5);
    x.set(4, -0.75);
    factor.ftran(x);
    CHECK(x.value[1] == 2.5);
    CHECK(x.value[4] == -0.75);
    CHECK(x.value[0] == 0.0);
    check_pattern_consistency(x);

    x.clear();
    x.set(3, 1.25);
    factor.btran(x);
    CHECK(x.value[3] == 1.25);
    CHECK(x.value[2] == 0.0);
  }

  TEST_CASE("solves match a dense inverse") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 10; ++round) {
      const Eigen::Index m = 4 + static_cast<Eigen::Index>(round % 4);
      const CscFixture fixture = CscFixture::from_dense(diagonally_dominant(rng, m, m + 2));
      // Mix structural and slack columns while keeping the basis invertible:
      // diagonal dominance keeps structural j on position j safe, and slacks
      // are unit columns on their own row.
      std::vector<std::int32_t> columns;
      for (Eigen::Index p = 0; p < m; ++p) {
        const bool slack = (p % 3 == 2);
        columns.push_back(static_cast<std::int32_t>(
            slack ? fixture.structural + static_cast<std::int64_t>(p) : p));
      }
      lpi::BasisFactor factor;
      factor.attach(fixture.rows, fixture.source());
      REQUIRE(factor.factorize(columns).ok());
      CHECK(factor.factor_nonzeros() > 0);
      const Eigen::MatrixXd basis = fixture.basis_matrix(columns);

      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      rhs[0] = 1.0;
      rhs[m - 1] = -2.0;
      const Eigen::VectorXd expected = basis.fullPivLu().solve(rhs);
      lpi::SparseVector x;
      x.resize(m);
      x.set(0, 1.0);
      x.set(static_cast<std::int32_t>(m - 1), -2.0);
      factor.ftran(x);
      check_pattern_consistency(x);
      for (Eigen::Index p = 0; p < m; ++p) {
        CHECK(x.value[p] == doctest::Approx(expected[p]).epsilon(1e-12).scale(1.0));
      }

      Eigen::VectorXd dense = rhs;
      factor.ftran_dense(dense);
      CHECK((dense - expected).lpNorm<Eigen::Infinity>() < 1e-12);

      Eigen::VectorXd price = Eigen::VectorXd::Zero(m);
      price[1] = 3.0;
      const Eigen::VectorXd expected_t = basis.transpose().fullPivLu().solve(price);
      lpi::SparseVector y;
      y.resize(m);
      y.set(1, 3.0);
      factor.btran(y);
      check_pattern_consistency(y);
      for (Eigen::Index r = 0; r < m; ++r) {
        CHECK(y.value[r] == doctest::Approx(expected_t[r]).epsilon(1e-12).scale(1.0));
      }

      Eigen::VectorXd dense_t = price;
      factor.btran_dense(dense_t);
      CHECK((dense_t - expected_t).lpNorm<Eigen::Infinity>() < 1e-12);
    }
  }

  TEST_CASE("eta updates track column replacements") {
    std::mt19937_64 rng(13);
    const Eigen::Index m = 6;
    const CscFixture fixture = CscFixture::from_dense(diagonally_dominant(rng, m, m + 2));
    std::vector<std::int32_t> columns{0, 1, 2, 3, 4, 5};
    lpi::BasisFactor factor;
    factor.attach(fixture.rows, fixture.source());
    REQUIRE(factor.factorize(columns).ok());
    CHECK(factor.eta_count() == 0);

    for (const std::int32_t entering : {6, 7}) {
      // spike = B^-1 a_entering, expressed in basis positions.
      const Eigen::VectorXd a_enter = fixture.dense_column(entering);
      lpi::SparseVector spike;
      spike.resize(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (a_enter[i] != 0.0) spike.set(static_cast<std::int32_t>(i), a_enter[i]);
      }
      factor.ftran(spike);
      std::int32_t pivot = -1;
      double best = 0.0;
      for (const std::int32_t p : spike.index) {
        if (std::abs(spike.value[p]) > best) {
          best = std::abs(spike.value[p]);
          pivot = p;
        }
      }
      REQUIRE(pivot >= 0);
      factor.push_eta(spike, pivot);
      columns[static_cast<std::size_t>(pivot)] = entering;
    }
    CHECK(factor.eta_count() == 2);
    CHECK(factor.eta_entries() > 0);

    const Eigen::MatrixXd basis = fixture.basis_matrix(columns);
    Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(m, 1.0, 2.0);
    const Eigen::VectorXd expected = basis.fullPivLu().solve(rhs);
    Eigen::VectorXd dense = rhs;
    factor.ftran_dense(dense);
    CHECK((dense - expected).lpNorm<Eigen::Infinity>() < 1e-10);

    Eigen::VectorXd price = Eigen::VectorXd::LinSpaced(m, -1.0, 1.0);
    const Eigen::VectorXd expected_t = basis.transpose().fullPivLu().solve(price);
    Eigen::VectorXd dense_t = price;
    factor.btran_dense(dense_t);
    CHECK((dense_t - expected_t).lpNorm<Eigen::Infinity>() < 1e-10);

    // Refactorizing from scratch drops the eta file and agrees.
    REQUIRE(factor.factorize(columns).ok());
    CHECK(factor.eta_count() == 0);
    Eigen::VectorXd fresh = rhs;
    factor.ftran_dense(fresh);
    CHECK((fresh - expected).lpNorm<Eigen::Infinity>() < 1e-10);
  }

  TEST_CASE("singular bases report the slots to patch") {
    Eigen::MatrixXd a(3, 3);
    a << 1.0, 1.0, 0.0,   //
        2.0, 2.0, 1.0,    // columns 0 and 1 are identical
        0.0, 0.0, 3.0;
    const CscFixture fixture = CscFixture::from_dense(a);
    lpi::BasisFactor factor;
    factor.attach(fixture.rows, fixture.source());
    std::vector<std::int32_t> columns{0, 1, 2};
    const lpi::FactorReport report = factor.factorize(columns);
    REQUIRE_FALSE(report.ok());
    REQUIRE(report.failed_positions.size() == 1);
    REQUIRE(report.free_rows.size() == 1);

    // Patch the failed slot with the slack of the uncovered row, as the
    // solver does, and the factorization succeeds.
    columns[static_cast<std::size_t>(report.failed_positions[0])] =
        static_cast<std::int32_t>(fixture.structural + report.free_rows[0]);
    REQUIRE(factor.factorize(columns).ok());

    const Eigen::MatrixXd basis = fixture.basis_matrix(columns);
    Eigen::VectorXd rhs(3);
    rhs << 1.0, 0.5, -1.0;
    const Eigen::VectorXd expected = basis.fullPivLu().solve(rhs);
    Eigen::VectorXd dense = rhs;
    factor.ftran_dense(dense);
    CHECK((dense - expected).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_SUITE("lp_core") {
  TEST_CASE("minimizes a single bounded variable against a floor") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, 1.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::GreaterEqual, 3.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.objective == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(solution.values[0] == doctest::Approx(3.0).epsilon(1e-9));
  }

  TEST_CASE("negative costs push a variable to its ceiling") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, rec::kInfinity, -1.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::LessEqual, 5.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.objective == doctest::Approx(-5.0).epsilon(1e-9));
    CHECK(solution.values[0] == doctest::Approx(5.0).epsilon(1e-9));
  }

  TEST_CASE("contradictory rows are infeasible") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, 1.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::GreaterEqual, 2.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::LessEqual, 1.0);
    CHECK(lp::solve(model).status == lp::Status::Infeasible);
  }

  TEST_CASE("a bound conflicting with a row is infeasible") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 2.0, 2.0, 0.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::LessEqual, 1.0);
    CHECK(lp::solve(model).status == lp::Status::Infeasible);
  }

  TEST_CASE("missing ceilings surface as unbounded") {
    lp::Model model;
    model.add_variable("x", 0.0, rec::kInfinity, -1.0);
    CHECK(lp::solve(model).status == lp::Status::Unbounded);

    lp::Model free_model;
    const lp::Variable y = free_model.add_variable("y", -rec::kInfinity, rec::kInfinity, 1.0);
    free_model.add_constraint({{y, 1.0}}, lp::Relation::LessEqual, 4.0);
    CHECK(lp::solve(free_model).status == lp::Status::Unbounded);
  }

  TEST_CASE("equality rows with a fixed variable") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 1.0, 2.0);
    const lp::Variable y = model.add_variable("y", 0.25, 0.25, 0.0);
    model.add_constraint({{x, 1.0}, {y, 1.0}}, lp::Relation::Equal, 1.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.values[0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(solution.values[1] == 0.25);
    CHECK(solution.objective == doctest::Approx(1.5).epsilon(1e-9));
  }

  TEST_CASE("free variables ride the constraints") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", -rec::kInfinity, rec::kInfinity, 1.0);
    const lp::Variable y = model.add_variable("y", 0.0, 1.0, 1.0);
    model.add_constraint({{x, 1.0}, {y, 1.0}}, lp::Relation::GreaterEqual, 2.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.objective == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("row-free models settle at the cheaper bound") {
    lp::Model model;
    model.add_variable("x", -1.0, 3.0, 2.0);
    model.add_variable("y", 0.0, 2.0, -1.0);
    model.add_variable("z", -4.0, 4.0, 0.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.values[0] == -1.0);
    CHECK(solution.values[1] == 2.0);
    CHECK(solution.objective == doctest::Approx(-4.0).epsilon(1e-9));
  }

  TEST_CASE("negative bound ranges work") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", -4.0, -1.0, 1.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::GreaterEqual, -3.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.values[0] == doctest::Approx(-3.0).epsilon(1e-9));
  }

  TEST_CASE("two-pivot textbook instance") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, -2.0);
    const lp::Variable y = model.add_variable("y", 0.0, 10.0, -3.0);
    model.add_constraint({{x, 1.0}, {y, 2.0}}, lp::Relation::LessEqual, 4.0);
    model.add_constraint({{x, 3.0}, {y, 1.0}}, lp::Relation::LessEqual, 6.0);
    const lp::Solution solution = lp::solve(model);
    REQUIRE(solution.status == lp::Status::Optimal);
    CHECK(solution.values[0] == doctest::Approx(1.6).epsilon(1e-9));
    CHECK(solution.values[1] == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(solution.objective == doctest::Approx(-6.8).epsilon(1e-9));

    // The same instance trips the iteration limit when starved.
    lp::SolveOptions starved;
    starved.max_iterations = 1;
    CHECK_THROWS_WITH_AS(lp::solve(model, starved), Contains("iteration limit"),
                         rec::SolverError);
  }

  TEST_CASE("statistics mirror the model shape") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, -2.0);
    const lp::Variable y = model.add_variable("y", 0.0, 10.0, -3.0);
    model.add_constraint({{x, 1.0}, {y, 2.0}}, lp::Relation::LessEqual, 4.0);
    model.add_constraint({{x, 3.0}, {y, 1.0}}, lp::Relation::LessEqual, 6.0);
    const lp::Solution solution = lp::solve(model);
    CHECK(solution.statistics.rows == 2);
    CHECK(solution.statistics.columns == 2);
    CHECK(solution.statistics.nonzeros == 4);
    CHECK(solution.statistics.iterations > 0);
    CHECK(solution.statistics.solve_seconds >= 0.0);
  }

  TEST_CASE("model validation rejects malformed pieces") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 1.0, 1.0);
    CHECK_THROWS_WITH_AS(model.add_variable("bad", 2.0, 1.0, 0.0),
                         Contains("contradictory bounds"), rec::ModelError);
    CHECK_THROWS_AS(model.add_variable("nan", 0.0, 1.0,
                                       std::numeric_limits<double>::quiet_NaN()),
                    rec::ModelError);
    CHECK_THROWS_WITH_AS(model.add_constraint({{x, 1.0}, {x, 2.0}},
                                              lp::Relation::Equal, 1.0),
                         Contains("appears twice"), rec::ModelError);
    CHECK_THROWS_AS(model.add_constraint(std::initializer_list<lp::Term>{},
                                         lp::Relation::Equal, 0.0),
                    rec::ModelError);
    CHECK_THROWS_AS(model.add_constraint({{x, 1.0}}, lp::Relation::Equal, rec::kInfinity),
                    rec::ModelError);
    CHECK_THROWS_AS(model.set_variable_bounds(lp::Variable{}, 0.0, 1.0), rec::ModelError);
  }

  TEST_CASE("repeated solves are bit-identical") {
    std::mt19937_64 rng(101);
    lp::Model model = rec::testsupport::random_lp(rng, 5, 5);
    const lp::Solution first = lp::solve(model);
    const lp::Solution second = lp::solve(model);
    REQUIRE(first.status == second.status);
    if (first.status == lp::Status::Optimal) {
      CHECK(std::memcmp(&first.objective, &second.objective, sizeof(double)) == 0);
      REQUIRE(first.values.size() == second.values.size());
      CHECK(std::memcmp(first.values.data(), second.values.data(),
                        sizeof(double) * static_cast<std::size_t>(first.values.size())) == 0);
    }
  }

  TEST_CASE("scaling every cost scales the objective only") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, -2.0);
    const lp::Variable y = model.add_variable("y", 0.0, 10.0, -3.0);
    model.add_constraint({{x, 1.0}, {y, 2.0}}, lp::Relation::LessEqual, 4.0);
    model.add_constraint({{x, 3.0}, {y, 1.0}}, lp::Relation::LessEqual, 6.0);
    const lp::Solution base = lp::solve(model);

    const double scale = 3.75;
    model.set_cost(x, -2.0 * scale);
    model.set_cost(y, -3.0 * scale);
    const lp::Solution scaled = lp::solve(model);
    REQUIRE(scaled.status == lp::Status::Optimal);
    CHECK(scaled.values[0] == doctest::Approx(base.values[0]).epsilon(1e-12));
    CHECK(scaled.values[1] == doctest::Approx(base.values[1]).epsilon(1e-12));
    CHECK(scaled.objective ==
          doctest::Approx(base.objective * scale).epsilon(1e-9));
  }

  TEST_CASE("warm starts from a perturbed optimum") {
    std::mt19937_64 rng(555);
    int warmed = 0;
    for (int round = 0; round < 40; ++round) {
      lp::Model model = rec::testsupport::random_lp(rng, 5, 5);
      const lp::Solution cold = lp::solve(model);
      if (cold.status != lp::Status::Optimal || model.row_count() == 0) {
        continue;
      }
      model.set_rhs(lp::Row{0}, model.rhs()[0] + 0.125);
      const lp::Solution reference = lp::solve(model);
      lp::SolveOptions options;
      options.warm_start = &cold.basis;
      const lp::Solution warm = lp::solve(model, options);
      REQUIRE(warm.status == reference.status);
      if (reference.status == lp::Status::Optimal) {
        CHECK(warm.objective == doctest::Approx(reference.objective).epsilon(1e-9));
        check_solution_feasible(model, warm, 1e-7);
      }
      ++warmed;
    }
    CHECK(warmed > 10);  // the battery must actually exercise the path
  }

  TEST_CASE("frequent refactorization changes nothing") {
    std::mt19937_64 rng(808);
    for (int round = 0; round < 10; ++round) {
      lp::Model model = rec::testsupport::random_lp(rng, 5, 5);
      const lp::Solution base = lp::solve(model);
      lp::SolveOptions options;
      options.refactor_interval = 1;
      const lp::Solution frequent = lp::solve(model, options);
      REQUIRE(frequent.status == base.status);
      if (base.status == lp::Status::Optimal) {
        CHECK(frequent.objective == doctest::Approx(base.objective).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("random battery agrees with vertex enumeration") {
    std::mt19937_64 rng(90210);
    int optimal = 0;
    int infeasible = 0;
    for (int round = 0; round < 150; ++round) {
      const lp::Model model = rec::testsupport::random_lp(rng, 5, 5);
      const lp::Solution solution = lp::solve(model);
      const rec::testsupport::VertexOracleResult oracle =
          rec::testsupport::vertex_oracle_solve(model);
      if (oracle.feasible) {
        REQUIRE(solution.status == lp::Status::Optimal);
        CHECK(std::abs(solution.objective - oracle.objective) <= 1e-6);
        check_solution_feasible(model, solution, 1e-7);
        ++optimal;
      } else {
        REQUIRE(solution.status == lp::Status::Infeasible);
        ++infeasible;
      }
    }
    // The generator must produce a healthy mix or the battery proves little.
    CHECK(optimal >= 50);
    CHECK(infeasible >= 10);
  }
}

TEST_SUITE("mps") {
  TEST_CASE("exports the fixed-format sections in order") {
    lp::Model model;
    const lp::Variable x = model.add_variable("x", 0.0, 10.0, 1.5);
    const lp::Variable y = model.add_variable("y", -rec::kInfinity, rec::kInfinity, 0.0);
    const lp::Variable z = model.add_variable("z", 2.0, 2.0, -1.0);
    model.add_constraint({{x, 1.0}, {y, -2.0}}, lp::Relation::LessEqual, 4.0);
    model.add_constraint({{y, 1.0}, {z, 3.0}}, lp::Relation::Equal, 6.0);
    model.add_constraint({{x, 1.0}}, lp::Relation::GreaterEqual, 0.0);

    const std::string text = lp::to_mps(model, "UNITTEST");
    CHECK(text.find("NAME          UNITTEST\n") == 0);
    CHECK(text.find("ROWS\n") != std::string::npos);
    CHECK(text.find(" N  COST\n") != std::string::npos);
    CHECK(text.find(" L  R0000001\n") != std::string::npos);
    CHECK(text.find(" E  R0000002\n") != std::string::npos);
    CHECK(text.find(" G  R0000003\n") != std::string::npos);
    CHECK(text.find("COLUMNS\n") != std::string::npos);
    CHECK(text.find("C0000001") != std::string::npos);
    CHECK(text.find("1.50000E+00") != std::string::npos);   // cost of x
    CHECK(text.find("-2.00000E+00") != std::string::npos);  // coefficient on y
    CHECK(text.find("RHS\n") != std::string::npos);
    CHECK(text.find("4.00000E+00") != std::string::npos);
    CHECK(text.find("BOUNDS\n") != std::string::npos);
    CHECK(text.find(" UP BND") != std::string::npos);
    CHECK(text.find(" MI BND") != std::string::npos);
    CHECK(text.find(" PL BND") != std::string::npos);
    CHECK(text.find(" FX BND") != std::string::npos);
    CHECK(text.rfind("ENDATA\n") == text.size() - 7);

    // Zero right-hand sides are omitted; the G row keeps rhs 0.
    CHECK(text.find("RHS       R0000003") == std::string::npos);
  }

  TEST_CASE("write_mps creates the file and fails loudly on bad paths") {
    lp::Model model;
    model.add_variable("x", 0.0, 1.0, 1.0);
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "recsettle_tests";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "model.mps").string();
    lp::write_mps(model, path);
    std::ifstream file(path);
    std::string first;
    std::getline(file, first);
    CHECK(first == "NAME          RECMODEL");

    CHECK_THROWS_WITH_AS(lp::write_mps(model, "/nonexistent/dir/model.mps"),
                         Contains("cannot create"), rec::InputError);
  }
}
