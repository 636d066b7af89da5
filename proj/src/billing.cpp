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

#include "rec/billing.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "rec/csv.hpp"
#include "rec/timegrid.hpp"

namespace rec {
namespace {

constexpr double kFlowSlack = 1e-7;  // kWh of solver noise tolerated on a bound

std::vector<BillLine> make_lines(const MeterSeries& series, const ContractSet& contracts,
                                 const Eigen::MatrixXd* verified,
                                 const Eigen::MatrixXd* sold) {
  const int periods = static_cast<int>(series.periods());
  const int members = static_cast<int>(series.member_count());
  std::vector<BillLine> lines;
  lines.reserve(static_cast<std::size_t>(periods) * members);
  for (int t = 0; t < periods; ++t) {
    for (int i = 0; i < members; ++i) {
      const MemberContract& c = contracts.at(i);
      const double cn = series.net_consumption(t, i);
      const double pn = series.net_production(t, i);
      double v = verified != nullptr ? (*verified)(t, i) : 0.0;
      double y = sold != nullptr ? (*sold)(t, i) : 0.0;
      if (v > cn + kFlowSlack) {
        throw ModelError("verified allocation exceeds net consumption for member '" +
                         series.members[i] + "' in period " + std::to_string(t));
      }
      if (y > pn + kFlowSlack) {
        throw ModelError("local sale exceeds net production for member '" +
                         series.members[i] + "' in period " + std::to_string(t));
      }
      v = std::clamp(v, 0.0, cn);  // shave solver noise off the bounds
      y = std::clamp(y, 0.0, pn);
      BillLine line;
      line.member = series.members[i];
      line.period = t;
      line.grid_purchase = c.buy_price * (cn - v);
      line.local_purchase = c.local_buy_price * v;
      line.local_sale_revenue = c.local_sell_price * y;
      line.grid_sale_revenue = c.sell_price * (pn - y);
      lines.push_back(std::move(line));
    }
  }
  return lines;
}

}  // namespace

std::vector<BillLine> bill(const MeterSeries& series, const ContractSet& contracts,
                           const SettlementResult& result) {
  contracts.validate(series);
  if (result.verified.rows() != static_cast<Eigen::Index>(series.periods()) ||
      result.verified.cols() != static_cast<Eigen::Index>(series.member_count()) ||
      result.sold.rows() != result.verified.rows() ||
      result.sold.cols() != result.verified.cols()) {
    throw ModelError("settlement result does not match the series dimensions");
  }
  return make_lines(series, contracts, &result.verified, &result.sold);
}

std::vector<BillLine> baseline_bill(const MeterSeries& series, const ContractSet& contracts) {
  contracts.validate(series);
  return make_lines(series, contracts, nullptr, nullptr);
}

SavingsReport savings_report(const std::vector<BillLine>& settled,
                             const std::vector<BillLine>& baseline) {
  if (settled.size() != baseline.size()) {
    throw ModelError("bill sets have different sizes");
  }
  SavingsReport report;
  std::vector<std::string> order;  // member names in first-seen order
  for (std::size_t n = 0; n < settled.size(); ++n) {
    if (settled[n].member != baseline[n].member || settled[n].period != baseline[n].period) {
      throw ModelError("bill sets are not aligned");
    }
    auto it = std::find(order.begin(), order.end(), settled[n].member);
    std::size_t index = static_cast<std::size_t>(it - order.begin());
    if (it == order.end()) {
      order.push_back(settled[n].member);
      report.members.push_back({settled[n].member, 0.0, 0.0, 0.0, 0.0});
    }
    report.members[index].settled_total += settled[n].net();
    report.members[index].baseline_total += baseline[n].net();
  }
  for (MemberSavings& m : report.members) {
    m.delta = m.settled_total - m.baseline_total;
    m.delta_percent = m.baseline_total == 0.0 ? 0.0
                                              : 100.0 * m.delta / std::abs(m.baseline_total);
    report.settled_total += m.settled_total;
    report.baseline_total += m.baseline_total;
  }
  report.delta = report.settled_total - report.baseline_total;
  report.delta_percent = report.baseline_total == 0.0
                             ? 0.0
                             : 100.0 * report.delta / std::abs(report.baseline_total);
  return report;
}

void write_bill_csv(const std::string& path, const MeterSeries& series,
                    const std::vector<BillLine>& lines) {
  std::vector<std::string> out;
  out.reserve(lines.size() + 1);
  out.push_back("timestamp,member,grid_purchase,local_purchase,local_sale,grid_sale,net");
  for (const BillLine& line : lines) {
    if (line.period < 0 || line.period >= static_cast<int>(series.periods())) {
      throw ModelError("bill line period outside the series grid");
    }
    std::string row = format_timestamp(series.grid.timestamp(line.period));
    row += "," + line.member;
    row += "," + csv::format_fixed(round_money(line.grid_purchase), 4);
    row += "," + csv::format_fixed(round_money(line.local_purchase), 4);
    row += "," + csv::format_fixed(round_money(line.local_sale_revenue), 4);
    row += "," + csv::format_fixed(round_money(line.grid_sale_revenue), 4);
    row += "," + csv::format_fixed(round_money(line.net()), 4);
    out.push_back(std::move(row));
  }
  csv::write_lines(path, out);
}

void write_savings_json(const std::string& path, const SavingsReport& report) {
  nlohmann::ordered_json doc;
  doc["members"] = nlohmann::ordered_json::array();
  for (const MemberSavings& m : report.members) {
    doc["members"].push_back({{"member", m.member},
                              {"settled_total", round_money(m.settled_total)},
                              {"baseline_total", round_money(m.baseline_total)},
                              {"delta", round_money(m.delta)},
                              {"delta_percent", round_money(m.delta_percent)}});
  }
  doc["settled_total"] = round_money(report.settled_total);
  doc["baseline_total"] = round_money(report.baseline_total);
  doc["delta"] = round_money(report.delta);
  doc["delta_percent"] = round_money(report.delta_percent);
  std::vector<std::string> lines{doc.dump(2)};
  csv::write_lines(path, lines);
}

}  // namespace rec
