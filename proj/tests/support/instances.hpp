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
// Shared test fixtures: the two-period community with its reference prices,
// deterministic random communities, contract generators, and random small
// linear programs for the brute-force solver battery.

#ifndef RECSETTLE_TESTS_SUPPORT_INSTANCES_HPP_
#define RECSETTLE_TESTS_SUPPORT_INSTANCES_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rec/contracts.hpp"
#include "rec/keygen.hpp"
#include "rec/lp/model.hpp"
#include "rec/metering.hpp"

namespace rec::testsupport {

// --- Deterministic draws ----------------------------------------------------
// The standard distributions are implementation-defined, and several suites
// freeze derived expectations, so draws go through these instead: identical
// bits from the engine give identical doubles on every toolchain.

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return lo + (hi - lo) * u;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng() % span);
}

inline bool chance(std::mt19937_64& rng, double p) { return uniform(rng, 0.0, 1.0) < p; }

// --- Paths wired in by the build -------------------------------------------

inline std::string data_path(const std::string& name) {
  return std::string(RECSETTLE_TEST_DATA_DIR) + "/" + name;
}

inline std::string bin_path() { return RECSETTLE_BIN_PATH; }

// --- Two-period reference community -----------------------------------------
// Four members over two quarter-hours; one pure producer, one member that
// flips from consumption to production.  All reference values in the suites
// are derived from this fixture.

inline MeterSeries golden_series() {
  return ingest_signed(data_path("community_two_periods.csv"));
}

// The reference price set in EUR/kWh: buy 220, sell 60, local buy 100, local
// sell 98, deviation 0.1, all quoted per MWh.
inline MemberContract golden_price() {
  MemberContract price;
  price.buy_price = 0.220;
  price.sell_price = 0.060;
  price.local_buy_price = 0.100;
  price.local_sell_price = 0.098;
  price.deviation_price = 0.0001;
  return price;
}

inline ContractSet golden_contracts(const MeterSeries& series, double tolerance = 1.0,
                                    double ssr_floor = 0.0) {
  return uniform_contracts(series, golden_price(), tolerance, ssr_floor);
}

// --- Random communities -----------------------------------------------------

// A community with mixed consumers, producers and idle cells.  Values are
// rounded to three decimals so ties and exact zeros actually occur.
inline MeterSeries random_series(std::mt19937_64& rng, int periods, int members) {
  PeriodGrid grid;
  grid.start = 1488326400;  // 2017-03-01T00:00:00Z
  grid.cadence = 900;
  grid.count = periods;

  Eigen::MatrixXd consumption = Eigen::MatrixXd::Zero(periods, members);
  Eigen::MatrixXd production = Eigen::MatrixXd::Zero(periods, members);
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(members));
  for (int i = 0; i < members; ++i) {
    names.push_back("M" + std::to_string(i + 1));
    const bool has_panel = i == members - 1 || chance(rng, 0.4);  // at least one producer
    for (int t = 0; t < periods; ++t) {
      if (!chance(rng, 0.15)) {  // idle cells keep zero consumption
        consumption(t, i) = std::round(uniform(rng, 0.0, 1.2) * 1000.0) / 1000.0;
      }
      if (has_panel && !chance(rng, 0.25)) {
        production(t, i) = std::round(uniform(rng, 0.0, 1.6) * 1000.0) / 1000.0;
      }
    }
  }
  return MeterSeries::from_raw(grid, std::move(names), std::move(consumption),
                               std::move(production));
}

// One shared price record inside the community-saving regime, with strict
// margins on both sides so optimal verified volumes are unique.
inline MemberContract random_regime_price(std::mt19937_64& rng) {
  MemberContract price;
  price.buy_price = uniform(rng, 0.15, 0.30);
  price.local_buy_price = uniform(rng, 0.3, 0.85) * price.buy_price;
  price.sell_price = uniform(rng, 0.02, 0.08);
  price.local_sell_price = price.sell_price + uniform(rng, 0.005, 0.05);
  price.deviation_price = uniform(rng, 1e-5, 1e-4);
  return price;
}

// Per-member prices constrained only by local-buy <= buy and
// local-sell >= sell (equalities included), for the pointwise-savings
// property.
inline ContractSet heterogeneous_regime_contracts(std::mt19937_64& rng,
                                                  const MeterSeries& series,
                                                  double tolerance) {
  ContractSet contracts;
  const auto members = static_cast<int>(series.member_count());
  for (int i = 0; i < members; ++i) {
    MemberContract price;
    price.buy_price = uniform(rng, 0.10, 0.35);
    price.local_buy_price =
        chance(rng, 0.2) ? price.buy_price : uniform(rng, 0.0, 1.0) * price.buy_price;
    price.sell_price = uniform(rng, 0.0, 0.10);
    price.local_sell_price =
        chance(rng, 0.2) ? price.sell_price : price.sell_price + uniform(rng, 0.0, 0.08);
    price.deviation_price = uniform(rng, 0.0, 1e-4);
    contracts.members.push_back(price);
  }
  contracts.tolerance =
      Eigen::MatrixXd::Constant(series.periods(), series.member_count(), tolerance);
  return contracts;
}

// --- Instances sized for the grid-search reference ---------------------------
// At most two periods and three key holders; members beyond the holders get
// key zero and tolerance zero so the reference scan ignores them.

struct OracleInstance {
  MeterSeries series;
  ContractSet contracts;
  KeyMatrix keys;
};

inline OracleInstance oracle_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int periods = uniform_int(rng, 1, 2);
  const int holders = uniform_int(rng, 1, 3);
  const int members = holders + uniform_int(rng, 1, 2);  // extras supply production

  PeriodGrid grid;
  grid.start = 1488326400;
  grid.cadence = 900;
  grid.count = periods;

  Eigen::MatrixXd consumption = Eigen::MatrixXd::Zero(periods, members);
  Eigen::MatrixXd production = Eigen::MatrixXd::Zero(periods, members);
  std::vector<std::string> names;
  for (int i = 0; i < members; ++i) names.push_back("M" + std::to_string(i + 1));
  for (int t = 0; t < periods; ++t) {
    for (int i = 0; i < holders; ++i) {
      consumption(t, i) = std::round(uniform(rng, 0.0, 1.0) * 100.0) / 100.0;
    }
    for (int i = holders; i < members; ++i) {
      production(t, i) = std::round(uniform(rng, 0.1, 1.5) * 100.0) / 100.0;
    }
  }

  OracleInstance instance{
      MeterSeries::from_raw(grid, std::move(names), std::move(consumption),
                            std::move(production)),
      ContractSet{}, KeyMatrix{}};

  // Keys on a coarse simplex grid; the scan tolerance is kept small most of
  // the time so three-holder grids stay cheap.
  instance.keys = KeyMatrix::Zero(periods, members);
  for (int t = 0; t < periods; ++t) {
    double budget = uniform(rng, 0.4, 1.0);
    for (int i = 0; i < holders; ++i) {
      const double share = std::round(uniform(rng, 0.0, budget) * 100.0) / 100.0;
      instance.keys(t, i) = share;
      budget -= share;
    }
  }

  static constexpr double kTolerances[] = {0.0, 0.05, 0.05, 0.1, 0.1, 0.2, 1.0};
  const double tolerance = kTolerances[uniform_int(rng, 0, 6)];
  instance.contracts = uniform_contracts(instance.series, random_regime_price(rng),
                                         tolerance, 0.0);
  for (int t = 0; t < periods; ++t) {
    for (int i = holders; i < members; ++i) instance.contracts.tolerance(t, i) = 0.0;
  }
  return instance;
}

// --- Random small linear programs --------------------------------------------
// Integer data in [-5, 5], every variable boxed, sized for exhaustive vertex
// enumeration.  Infeasible instances are intentional and frequent.

inline lp::Model random_lp(std::mt19937_64& rng, int max_variables = 5,
                           int max_rows = 5) {
  lp::Model model;
  const int n = uniform_int(rng, 1, max_variables);
  const int m = uniform_int(rng, 0, max_rows);
  std::vector<lp::Variable> vars;
  for (int j = 0; j < n; ++j) {
    const double lo = uniform_int(rng, -3, 1);
    const double hi = lo + uniform_int(rng, 0, 4);
    vars.push_back(model.add_variable("x" + std::to_string(j), lo, hi,
                                      uniform_int(rng, -5, 5)));
  }
  for (int r = 0; r < m; ++r) {
    std::vector<lp::Term> terms;
    for (int j = 0; j < n; ++j) {
      if (chance(rng, 0.35)) continue;
      const int coeff = uniform_int(rng, -5, 5);
      if (coeff != 0) terms.push_back({vars[static_cast<std::size_t>(j)],
                                       static_cast<double>(coeff)});
    }
    if (terms.empty()) {
      terms.push_back({vars[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))], 1.0});
    }
    const auto relation = static_cast<lp::Relation>(uniform_int(rng, 0, 2));
    model.add_constraint(terms, relation, uniform_int(rng, -6, 6));
  }
  return model;
}

}  // namespace rec::testsupport

#endif  // RECSETTLE_TESTS_SUPPORT_INSTANCES_HPP_
