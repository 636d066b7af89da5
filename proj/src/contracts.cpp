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

#include "rec/contracts.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rec/common.hpp"

namespace rec {
namespace {

void check_price(double value, const std::string& what) {
  if (!std::isfinite(value) || value < 0.0) {
    throw InputError(what + " must be a finite non-negative price");
  }
}

}  // namespace

void ContractSet::validate(const MeterSeries& series) const {
  if (member_count() != series.member_count()) {
    throw InputError("contract set covers " + std::to_string(member_count()) +
                     " members, meter data has " + std::to_string(series.member_count()));
  }
  for (Eigen::Index i = 0; i < member_count(); ++i) {
    const MemberContract& c = at(i);
    const std::string who = "member '" + series.members[static_cast<std::size_t>(i)] + "'";
    check_price(c.buy_price, who + " buy price");
    check_price(c.sell_price, who + " sell price");
    check_price(c.local_buy_price, who + " local buy price");
    check_price(c.local_sell_price, who + " local sell price");
    check_price(c.deviation_price, who + " deviation price");
    if (c.deviation_price > kMaxDeviationPrice) {
      throw InputError(who + " deviation price " + std::to_string(c.deviation_price * 1000.0) +
                       " €/MWh exceeds the 0.1 €/MWh cap; the tie-break term must stay "
                       "far below billing prices");
    }
    if (!std::isfinite(c.ssr_floor) || c.ssr_floor < 0.0 || c.ssr_floor > 1.0) {
      throw InputError(who + " SSR floor must lie in [0, 1]");
    }
  }
  if (tolerance.rows() != series.periods() || tolerance.cols() != series.member_count()) {
    throw InputError("key tolerance matrix shape does not match the meter series");
  }
  if (!tolerance.allFinite() || (tolerance.array() < 0.0).any() ||
      (tolerance.array() > 1.0).any()) {
    throw InputError("key tolerances must lie in [0, 1]");
  }
}

ContractSet uniform_contracts(const MeterSeries& series, const MemberContract& price,
                              double tolerance, double ssr_floor) {
  ContractSet set;
  set.members.assign(static_cast<std::size_t>(series.member_count()), price);
  for (MemberContract& c : set.members) {
    c.ssr_floor = ssr_floor;
  }
  set.tolerance = Eigen::MatrixXd::Constant(series.periods(), series.member_count(), tolerance);
  set.validate(series);
  return set;
}

ContractSet load_contracts(const std::string& path, const MeterSeries& series, double tolerance) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open price file '" + path + "'");
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("price file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) {
    throw InputError("price file '" + path + "' must be a JSON object keyed by member");
  }

  ContractSet set;
  set.members.resize(static_cast<std::size_t>(series.member_count()));
  for (Eigen::Index i = 0; i < series.member_count(); ++i) {
    const std::string& name = series.members[static_cast<std::size_t>(i)];
    if (!doc.contains(name)) {
      throw InputError("price file '" + path + "' is missing member '" + name + "'");
    }
    const nlohmann::json& entry = doc.at(name);
    MemberContract contract;
    try {
      // Quoted in €/MWh in the file; stored in €/kWh.
      contract.buy_price = entry.at("buy").get<double>() / 1000.0;
      contract.sell_price = entry.at("sell").get<double>() / 1000.0;
      contract.local_buy_price = entry.at("local_buy").get<double>() / 1000.0;
      contract.local_sell_price = entry.at("local_sell").get<double>() / 1000.0;
      contract.deviation_price = entry.at("deviation").get<double>() / 1000.0;
      contract.ssr_floor = entry.value("ssr_floor", 0.0);
    } catch (const nlohmann::json::exception& e) {
      throw InputError("price file '" + path + "', member '" + name + "': " + e.what());
    }
    set.members[static_cast<std::size_t>(i)] = contract;
  }
  set.tolerance = Eigen::MatrixXd::Constant(series.periods(), series.member_count(), tolerance);
  set.validate(series);
  return set;
}

}  // namespace rec
