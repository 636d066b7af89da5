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
// Per-member, per-period electricity bills under a settlement and under the
// stand-alone baseline (no community), plus aggregated savings reports.

#ifndef RECSETTLE_BILLING_HPP_
#define RECSETTLE_BILLING_HPP_

#include <string>
#include <vector>

#include "rec/contracts.hpp"
#include "rec/metering.hpp"
#include "rec/settlement.hpp"

namespace rec {

// One member's bill for one metering period.  Amounts are in EUR and kept in
// full double precision; rounding to money digits happens only when a report
// is written out.
struct BillLine {
  std::string member;
  int period = 0;
  double grid_purchase = 0.0;      // retailer price * energy bought from the grid
  double local_purchase = 0.0;     // community price * verified allocation
  double local_sale_revenue = 0.0; // community price * local sales
  double grid_sale_revenue = 0.0;  // retailer price * energy sold to the grid

  // Always derived from the four components, never stored separately.
  double net() const {
    return grid_purchase + local_purchase - local_sale_revenue - grid_sale_revenue;
  }
};

// Bills for every (period, member) cell under the settled flows, in period-
// major order (line t * I + i covers period t, member i).  Flows are snapped
// into their physical ranges first; a verified allocation above the net
// consumption (or a sale above the net production) by more than 1e-7 kWh
// means the result is corrupt and raises ModelError.
std::vector<BillLine> bill(const MeterSeries& series, const ContractSet& contracts,
                           const SettlementResult& result);

// The same bills with no community exchanges at all (v = y = 0): every
// member trades only with its retailer.
std::vector<BillLine> baseline_bill(const MeterSeries& series, const ContractSet& contracts);

struct MemberSavings {
  std::string member;
  double settled_total = 0.0;   // EUR over the reporting period
  double baseline_total = 0.0;  // EUR over the reporting period
  double delta = 0.0;           // settled - baseline (negative = savings)
  double delta_percent = 0.0;   // 100 * delta / |baseline|, 0 for a zero baseline
};

struct SavingsReport {
  std::vector<MemberSavings> members;
  double settled_total = 0.0;
  double baseline_total = 0.0;
  double delta = 0.0;
  double delta_percent = 0.0;
};

// Aggregates two matching bill sets (same members, same periods, same order)
// into per-member and community totals.
SavingsReport savings_report(const std::vector<BillLine>& settled,
                             const std::vector<BillLine>& baseline);

// CSV export, one line per (period, member):
// timestamp,member,grid_purchase,local_purchase,local_sale,grid_sale,net
// with amounts rounded half-even to 4 decimals.
void write_bill_csv(const std::string& path, const MeterSeries& series,
                    const std::vector<BillLine>& lines);

// JSON export of a savings report (amounts rounded half-even to 4 decimals).
void write_savings_json(const std::string& path, const SavingsReport& report);

}  // namespace rec

#endif  // RECSETTLE_BILLING_HPP_
