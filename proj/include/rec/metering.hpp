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

#ifndef RECSETTLE_METERING_HPP_
#define RECSETTLE_METERING_HPP_

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "rec/timegrid.hpp"

namespace rec {

// Netting of raw meter channels: behind-the-meter self-consumption is
// removed so at most one of net consumption / net production is nonzero per
// (period, member) cell.  Expression-friendly: accepts any Eigen dense
// expression and returns a lazy expression of the same shape.
template <typename DerivedC, typename DerivedP>
auto net_consumption(const Eigen::MatrixBase<DerivedC>& consumption,
                     const Eigen::MatrixBase<DerivedP>& production) {
  return (consumption - production).cwiseMax(typename DerivedC::Scalar(0));
}

template <typename DerivedC, typename DerivedP>
auto net_production(const Eigen::MatrixBase<DerivedC>& consumption,
                    const Eigen::MatrixBase<DerivedP>& production) {
  return (production - consumption).cwiseMax(typename DerivedC::Scalar(0));
}

// Per-member, per-period metering data for one reporting period.  Rows are
// metering periods (t = 0..T-1), columns are members, energies in kWh.
// Immutable after construction; safe to share across threads.
struct MeterSeries {
  PeriodGrid grid;
  std::vector<std::string> members;
  Eigen::MatrixXd consumption;      // raw channel C, >= 0
  Eigen::MatrixXd production;       // raw channel P, >= 0
  Eigen::MatrixXd net_consumption;  // Cn = max(0, C - P)
  Eigen::MatrixXd net_production;   // Pn = max(0, P - C)

  Eigen::Index periods() const { return consumption.rows(); }
  Eigen::Index member_count() const { return consumption.cols(); }

  // Builds a series from raw channels, validating non-negativity and
  // dimension agreement, and computing the netted channels.
  static MeterSeries from_raw(const PeriodGrid& grid, std::vector<std::string> members,
                              Eigen::MatrixXd consumption, Eigen::MatrixXd production);
};

// Reads a single-channel signed CSV (positive = consumption, negative =
// production).  The meter already netted behind-the-meter flows, so the
// netted channels equal the raw ones.  When `grid` is provided the file's
// timestamp column must match it exactly; otherwise the grid is inferred.
MeterSeries ingest_signed(const std::string& path, const PeriodGrid* grid = nullptr,
                          int assumed_offset_minutes = 0);

// Reads separate consumption and production CSVs sharing header and grid.
MeterSeries ingest_dual(const std::string& consumption_path,
                        const std::string& production_path,
                        const PeriodGrid* grid = nullptr,
                        int assumed_offset_minutes = 0);

// Writes the signed single-channel form (C - P per cell, 6 decimals).  For a
// series ingested via the signed convention this round-trips exactly.
void export_signed(const MeterSeries& series, const std::string& path);

// Period totals (sum of net consumption, sum of net production) used by the
// allocation constraints.
std::pair<double, double> totals(const MeterSeries& series, Eigen::Index t);

}  // namespace rec

#endif  // RECSETTLE_METERING_HPP_
