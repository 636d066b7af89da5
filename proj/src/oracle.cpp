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

#include "rec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rec/common.hpp"

namespace rec {
namespace {

constexpr int kMaxPeriods = 2;
constexpr int kMaxActiveHolders = 3;
constexpr std::int64_t kMaxGridPoints = 5'000'000;  // per period, before refusing

// The regime in which v = min(a, Cn) plus a greedy sale split is the optimal
// inner assignment for fixed keys: every verified unit and every matched sale
// unit saves money, and the sale split is objective-neutral.
void check_price_regime(const MeterSeries& series, const ContractSet& contracts) {
  const int members = static_cast<int>(series.member_count());
  double common_sale_margin = 0.0;
  for (int i = 0; i < members; ++i) {
    const MemberContract& c = contracts.at(i);
    if (c.buy_price < c.local_buy_price) {
      throw InputError("oracle requires buy price >= local buy price");
    }
    const double sale_margin = c.local_sell_price - c.sell_price;
    if (sale_margin < 0.0) {
      throw InputError("oracle requires local sell price >= sell price");
    }
    if (i == 0) {
      common_sale_margin = sale_margin;
    } else if (std::abs(sale_margin - common_sale_margin) > 1e-12) {
      throw InputError("oracle requires one common local-sale margin");
    }
    if (c.ssr_floor > 0.0) {
      throw InputError("oracle does not handle self-supply floors");
    }
  }
}

struct PeriodScan {
  double objective = 0.0;
  std::vector<double> keys;  // per member
  std::int64_t evaluated = 0;
};

// Prices one key vector of one period straight from the bill formula.
double price_point(const MeterSeries& series, const ContractSet& contracts,
                   const Eigen::MatrixXd& initial_alloc, int t, double sigma,
                   const std::vector<double>& keys) {
  const int members = static_cast<int>(series.member_count());
  double verified_total = 0.0;
  double bills = 0.0;
  double dev_up = 0.0, dev_down = 0.0;
  std::vector<double> verified(members);
  for (int i = 0; i < members; ++i) {
    const double a = keys[i] * sigma;
    verified[i] = std::min(a, series.net_consumption(t, i));
    verified_total += verified[i];
    dev_up = std::max(dev_up, a - initial_alloc(t, i));
    dev_down = std::max(dev_down, initial_alloc(t, i) - a);
  }
  double remaining = verified_total;  // total sales must match total purchases
  double penalty_rate = 0.0;
  for (int i = 0; i < members; ++i) {
    const MemberContract& c = contracts.at(i);
    const double cn = series.net_consumption(t, i);
    const double pn = series.net_production(t, i);
    const double sale = std::min(pn, remaining);
    remaining -= sale;
    bills += c.buy_price * (cn - verified[i]) + c.local_buy_price * verified[i] -
             c.local_sell_price * sale - c.sell_price * (pn - sale);
    penalty_rate += c.deviation_price;
  }
  return bills + penalty_rate * (std::max(dev_up, 0.0) + std::max(dev_down, 0.0));
}

PeriodScan scan_period(const MeterSeries& series, const ContractSet& contracts,
                       const KeyMatrix& initial_keys, const Eigen::MatrixXd& initial_alloc,
                       int t, double sigma, double step) {
  const int members = static_cast<int>(series.member_count());

  std::vector<int> active;
  std::vector<std::vector<double>> candidates;
  for (int i = 0; i < members; ++i) {
    const double tol = contracts.tolerance(t, i);
    const double lo = std::max(0.0, initial_keys(t, i) - tol);
    const double hi = std::min(1.0, initial_keys(t, i) + tol);
    if (hi <= 0.0) continue;  // pinned to zero by its bounds
    if (series.net_consumption(t, i) <= 0.0 && lo <= 0.0 && initial_keys(t, i) <= 0.0) {
      // k = 0 dominates: nothing can be verified, a positive key only burns
      // share budget and can only raise the deviation penalty.
      continue;
    }
    active.push_back(i);
    std::vector<double> values{lo, hi, initial_keys(t, i)};
    for (std::int64_t m = static_cast<std::int64_t>(std::ceil(lo / step - 1e-9));
         m * step <= hi + 1e-12; ++m) {
      const double value = static_cast<double>(m) * step;
      if (value >= lo - 1e-12 && value <= hi + 1e-12) values.push_back(value);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end(),
                             [](double a, double b) { return std::abs(a - b) <= 1e-13; }),
                 values.end());
    candidates.push_back(std::move(values));
  }
  if (static_cast<int>(active.size()) > kMaxActiveHolders) {
    throw InputError("oracle instance too large: more than 3 members hold keys");
  }
  std::int64_t points = 1;
  for (const auto& values : candidates) {
    points *= static_cast<std::int64_t>(values.size());
    if (points > kMaxGridPoints) {
      throw InputError("oracle instance too large: key grid exceeds the scan budget");
    }
  }

  PeriodScan best;
  best.keys.assign(members, 0.0);
  std::vector<double> keys(members, 0.0);
  bool have_best = false;

  // Depth-first over the candidate lists, lowest member index outermost, so
  // ties resolve to the lexicographically smallest key vector.
  auto recurse = [&](auto&& self, std::size_t depth, double key_sum) -> void {
    if (key_sum > 1.0 + 1e-9) return;
    if (depth == active.size()) {
      const double objective =
          price_point(series, contracts, initial_alloc, t, sigma, keys);
      ++best.evaluated;
      if (!have_best || objective < best.objective - 1e-15) {
        have_best = true;
        best.objective = objective;
        best.keys = keys;
      }
      return;
    }
    for (const double value : candidates[depth]) {
      keys[active[depth]] = value;
      self(self, depth + 1, key_sum + value);
      keys[active[depth]] = 0.0;
    }
  };
  recurse(recurse, 0, 0.0);
  if (!have_best) {
    // Only possible if even the all-lower-bound point breaks the share cap,
    // which validate_keys rules out; kept as a hard failure for safety.
    throw SolverError("key grid scan found no admissible point");
  }
  return best;
}

}  // namespace

OracleResult grid_search_settle(const MeterSeries& series, const ContractSet& contracts,
                                const KeyMatrix& initial_keys, double step) {
  contracts.validate(series);
  validate_keys(initial_keys, series);
  check_price_regime(series, contracts);
  if (series.periods() > kMaxPeriods) {
    throw InputError("oracle instance too large: more than 2 periods");
  }
  if (!(step > 0.0) ||
      std::abs(1.0 / step - std::round(1.0 / step)) > 1e-9) {
    throw InputError("oracle step must be positive and divide 1");
  }

  const int periods = static_cast<int>(series.periods());
  const int members = static_cast<int>(series.member_count());
  const Eigen::VectorXd sigma = series.net_production.rowwise().sum();
  OracleResult result;
  result.keys = initial_keys;

  Eigen::MatrixXd alloc(periods, members);
  for (int t = 0; t < periods; ++t) {
    for (int i = 0; i < members; ++i) alloc(t, i) = initial_keys(t, i) * sigma[t];
  }

  double sale_margin = members > 0
                           ? contracts.at(0).local_sell_price - contracts.at(0).sell_price
                           : 0.0;
  for (int t = 0; t < periods; ++t) {
    if (sigma[t] <= 0.0) {
      // Nothing to allocate: keys stay initial, bills are pure grid trades.
      for (int i = 0; i < members; ++i) {
        result.objective += contracts.at(i).buy_price * series.net_consumption(t, i) -
                            contracts.at(i).sell_price * series.net_production(t, i);
      }
      continue;
    }
    PeriodScan scan =
        scan_period(series, contracts, initial_keys, alloc, t, sigma[t], step);
    result.objective += scan.objective;
    result.evaluated += scan.evaluated;
    for (int i = 0; i < members; ++i) result.keys(t, i) = scan.keys[i];

    double purchase_margin_sum = 0.0, penalty_sum = 0.0;
    for (int i = 0; i < members; ++i) {
      purchase_margin_sum += contracts.at(i).buy_price - contracts.at(i).local_buy_price;
      penalty_sum += contracts.at(i).deviation_price;
    }
    result.lipschitz += sigma[t] * (purchase_margin_sum + members * sale_margin +
                                    2.0 * penalty_sum);
  }
  return result;
}

}  // namespace rec
