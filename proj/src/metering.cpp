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

#include "rec/metering.hpp"

#include <utility>

#include "rec/common.hpp"
#include "rec/csv.hpp"

namespace rec {
namespace {

struct ParsedFile {
  std::vector<std::string> members;
  std::vector<EpochSeconds> stamps;
  Eigen::MatrixXd values;  // T x I, signed as stored in the file
};

ParsedFile parse_meter_file(const std::string& path, int assumed_offset_minutes) {
  csv::Table table = csv::read_table(path);
  if (table.header.size() < 2 || table.header[0] != "timestamp") {
    throw InputError(path + ": header must be 'timestamp,<member>,...'");
  }
  ParsedFile parsed;
  parsed.members.assign(table.header.begin() + 1, table.header.end());
  for (std::size_t i = 0; i < parsed.members.size(); ++i) {
    if (parsed.members[i].empty()) {
      throw InputError(path + ": empty member name in header column " + std::to_string(i + 2));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (parsed.members[j] == parsed.members[i]) {
        throw InputError(path + ": duplicate member name '" + parsed.members[i] + "'");
      }
    }
  }

  const Eigen::Index T = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index I = static_cast<Eigen::Index>(parsed.members.size());
  parsed.values.resize(T, I);
  parsed.stamps.reserve(table.rows.size());
  for (Eigen::Index t = 0; t < T; ++t) {
    const std::vector<std::string>& row = table.rows[t];
    // Data rows start at file row 2 (row 1 is the header).
    const std::string where = path + ", row " + std::to_string(t + 2);
    parsed.stamps.push_back(parse_timestamp(row[0], assumed_offset_minutes));
    for (Eigen::Index i = 0; i < I; ++i) {
      parsed.values(t, i) =
          csv::parse_number(row[i + 1], where + ", column '" + parsed.members[i] + "'");
    }
  }
  return parsed;
}

void check_grid(const ParsedFile& parsed, const PeriodGrid* grid, const std::string& path,
                PeriodGrid& out) {
  if (grid == nullptr) {
    out = infer_grid(parsed.stamps);
    return;
  }
  grid->validate();
  if (static_cast<std::int64_t>(parsed.stamps.size()) != grid->count) {
    throw InputError(path + ": expected " + std::to_string(grid->count) + " data rows, found " +
                     std::to_string(parsed.stamps.size()));
  }
  for (std::size_t t = 0; t < parsed.stamps.size(); ++t) {
    const EpochSeconds expected = grid->timestamp(static_cast<std::int64_t>(t));
    if (parsed.stamps[t] != expected) {
      throw InputError(path + ", row " + std::to_string(t + 2) + ": timestamp " +
                       format_timestamp(parsed.stamps[t]) + " does not match the grid (expected " +
                       format_timestamp(expected) + ")");
    }
  }
  out = *grid;
}

}  // namespace

MeterSeries MeterSeries::from_raw(const PeriodGrid& grid, std::vector<std::string> members,
                                  Eigen::MatrixXd consumption, Eigen::MatrixXd production) {
  grid.validate();
  if (consumption.rows() != production.rows() || consumption.cols() != production.cols()) {
    throw InputError("consumption and production channels disagree in shape");
  }
  if (consumption.rows() != grid.count) {
    throw InputError("meter data covers " + std::to_string(consumption.rows()) +
                     " periods but the grid has " + std::to_string(grid.count));
  }
  if (static_cast<Eigen::Index>(members.size()) != consumption.cols()) {
    throw InputError("member list does not match the number of data columns");
  }
  if (!consumption.allFinite() || !production.allFinite()) {
    throw InputError("meter channels contain non-finite values");
  }
  if ((consumption.array() < 0).any() || (production.array() < 0).any()) {
    throw InputError("raw consumption/production must be non-negative "
                     "(signed data belongs to the single-channel convention)");
  }
  MeterSeries series;
  series.grid = grid;
  series.members = std::move(members);
  series.net_consumption = rec::net_consumption(consumption, production);
  series.net_production = rec::net_production(consumption, production);
  series.consumption = std::move(consumption);
  series.production = std::move(production);
  return series;
}

MeterSeries ingest_signed(const std::string& path, const PeriodGrid* grid,
                          int assumed_offset_minutes) {
  ParsedFile parsed = parse_meter_file(path, assumed_offset_minutes);
  PeriodGrid resolved;
  check_grid(parsed, grid, path, resolved);

  MeterSeries series;
  series.grid = resolved;
  series.members = std::move(parsed.members);
  // Positive readings are consumption, negative production; the meter has
  // already netted behind-the-meter flows, so netted == raw.
  series.consumption = parsed.values.cwiseMax(0.0);
  series.production = (-parsed.values).cwiseMax(0.0);
  series.net_consumption = series.consumption;
  series.net_production = series.production;
  return series;
}

MeterSeries ingest_dual(const std::string& consumption_path, const std::string& production_path,
                        const PeriodGrid* grid, int assumed_offset_minutes) {
  ParsedFile cons = parse_meter_file(consumption_path, assumed_offset_minutes);
  ParsedFile prod = parse_meter_file(production_path, assumed_offset_minutes);
  if (cons.members != prod.members) {
    throw InputError("member sets differ between '" + consumption_path + "' and '" +
                     production_path + "'");
  }
  if (cons.stamps != prod.stamps) {
    throw InputError("timestamp columns differ between '" + consumption_path + "' and '" +
                     production_path + "'");
  }
  PeriodGrid resolved;
  check_grid(cons, grid, consumption_path, resolved);
  if ((cons.values.array() < 0).any()) {
    throw InputError(consumption_path + ": negative consumption is invalid in dual-channel mode");
  }
  if ((prod.values.array() < 0).any()) {
    throw InputError(production_path + ": negative production is invalid in dual-channel mode");
  }
  return MeterSeries::from_raw(resolved, std::move(cons.members), std::move(cons.values),
                               std::move(prod.values));
}

void export_signed(const MeterSeries& series, const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(static_cast<std::size_t>(series.periods()) + 1);
  std::string header = "timestamp";
  for (const std::string& m : series.members) {
    header += "," + m;
  }
  lines.push_back(std::move(header));
  for (Eigen::Index t = 0; t < series.periods(); ++t) {
    std::string line = format_timestamp(series.grid.timestamp(t));
    for (Eigen::Index i = 0; i < series.member_count(); ++i) {
      line += "," + csv::format_roundtrip(series.consumption(t, i) - series.production(t, i));
    }
    lines.push_back(std::move(line));
  }
  csv::write_lines(path, lines);
}

std::pair<double, double> totals(const MeterSeries& series, Eigen::Index t) {
  if (t < 0 || t >= series.periods()) {
    throw InputError("period index out of range");
  }
  return {series.net_consumption.row(t).sum(), series.net_production.row(t).sum()};
}

}  // namespace rec
