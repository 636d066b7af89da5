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

#ifndef RECSETTLE_CONTRACTS_HPP_
#define RECSETTLE_CONTRACTS_HPP_

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rec/metering.hpp"

namespace rec {

// Per-member commercial terms.  All prices are stored internally in €/kWh;
// the operator-facing JSON quotes €/MWh and is divided by 1000 on load.
struct MemberContract {
  double buy_price = 0.0;         // retailer price for grid purchases
  double sell_price = 0.0;        // retailer price for grid sales
  double local_buy_price = 0.0;   // price paid for community production
  double local_sell_price = 0.0;  // price received for community sales
  double deviation_price = 0.0;   // fictive tie-break cost on key deviations
  double ssr_floor = 0.0;         // minimum self-sufficiency rate in [0,1]
};

// The largest admissible tie-break cost: the fictive deviation price has to
// stay far below billing prices or it could flip the billing optimum.
inline constexpr double kMaxDeviationPrice = 1e-4;  // €/kWh, i.e. 0.1 €/MWh

// Contracts for a whole community, aligned with a MeterSeries member list,
// plus the per-period key tolerances X[t][i].
struct ContractSet {
  std::vector<MemberContract> members;
  Eigen::MatrixXd tolerance;  // T x I, each entry in [0,1]

  const MemberContract& at(Eigen::Index i) const { return members[static_cast<std::size_t>(i)]; }
  Eigen::Index member_count() const { return static_cast<Eigen::Index>(members.size()); }

  // Validates price/floor/tolerance ranges against a series; throws
  // InputError on violations (including deviation_price > kMaxDeviationPrice).
  void validate(const MeterSeries& series) const;
};

// Builds a contract set with one shared price record, tolerance X for every
// (t,i), and a shared SSR floor.  The price record is given in €/kWh.
ContractSet uniform_contracts(const MeterSeries& series, const MemberContract& price,
                              double tolerance, double ssr_floor = 0.0);

// Loads a JSON map member -> {buy, sell, local_buy, local_sell, deviation}
// quoted in €/MWh; every series member must be covered.  Optional per-member
// "ssr_floor" (fraction) is honored.  `tolerance` seeds X uniformly.
ContractSet load_contracts(const std::string& path, const MeterSeries& series, double tolerance);

}  // namespace rec

#endif  // RECSETTLE_CONTRACTS_HPP_
