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

#include "rec/keygen.hpp"

#include "rec/common.hpp"
#include "rec/csv.hpp"

namespace rec {

KeyStrategyKind parse_key_strategy(const std::string& name) {
  if (name == "uniform") return KeyStrategyKind::Uniform;
  if (name == "proportional-static") return KeyStrategyKind::ProportionalStatic;
  if (name == "proportional-dynamic") return KeyStrategyKind::ProportionalDynamic;
  if (name == "explicit") return KeyStrategyKind::Explicit;
  throw InputError("unknown key strategy '" + name +
                   "' (expected uniform, proportional-static, proportional-dynamic, explicit)");
}

void validate_keys(const KeyMatrix& keys, const MeterSeries& series) {
  if (keys.rows() != series.periods() || keys.cols() != series.member_count()) {
    throw InputError("key matrix shape does not match the meter series");
  }
  if (!keys.allFinite()) {
    throw InputError("key matrix contains non-finite entries");
  }
  if ((keys.array() < 0.0).any() || (keys.array() > 1.0).any()) {
    throw InputError("keys must lie in [0, 1]");
  }
  for (Eigen::Index t = 0; t < keys.rows(); ++t) {
    const double sum = keys.row(t).sum();
    if (sum > 1.0 + 1e-9) {
      throw InputError("keys at " + format_timestamp(series.grid.timestamp(t)) +
                       " sum to " + std::to_string(sum) + " > 1");
    }
  }
}

KeyMatrix uniform_keys(const MeterSeries& series) {
  const Eigen::Index T = series.periods();
  const Eigen::Index I = series.member_count();
  KeyMatrix keys = KeyMatrix::Zero(T, I);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::Index consumers = (series.net_consumption.row(t).array() > 0.0).count();
    if (consumers == 0) {
      continue;
    }
    const double share = 1.0 / static_cast<double>(consumers);
    for (Eigen::Index i = 0; i < I; ++i) {
      if (series.net_consumption(t, i) > 0.0) {
        keys(t, i) = share;
      }
    }
  }
  return keys;
}

KeyMatrix proportional_static_keys(const MeterSeries& series) {
  const Eigen::VectorXd demand = series.net_consumption.colwise().sum();
  const double total = demand.sum();
  if (!(total > 0.0)) {
    throw InputError("proportional-static keys need positive total net consumption");
  }
  const Eigen::RowVectorXd shares = (demand / total).transpose();
  return shares.replicate(series.periods(), 1);
}

KeyMatrix proportional_dynamic_keys(const MeterSeries& series) {
  const Eigen::Index T = series.periods();
  KeyMatrix keys = KeyMatrix::Zero(T, series.member_count());
  for (Eigen::Index t = 0; t < T; ++t) {
    const double total = series.net_consumption.row(t).sum();
    if (total > 0.0) {
      keys.row(t) = series.net_consumption.row(t) / total;
    }
  }
  return keys;
}

KeyMatrix explicit_keys(const std::string& path, const MeterSeries& series,
                        int assumed_offset_minutes) {
  csv::Table table = csv::read_table(path);
  if (table.header.size() != series.members.size() + 1 || table.header[0] != "timestamp") {
    throw InputError(path + ": header must be 'timestamp,<member>,...' matching the meter data");
  }
  for (std::size_t i = 0; i < series.members.size(); ++i) {
    if (table.header[i + 1] != series.members[i]) {
      throw InputError(path + ": member column " + std::to_string(i + 2) + " is '" +
                       table.header[i + 1] + "', expected '" + series.members[i] + "'");
    }
  }
  if (static_cast<Eigen::Index>(table.rows.size()) != series.periods()) {
    throw InputError(path + ": expected " + std::to_string(series.periods()) +
                     " data rows, found " + std::to_string(table.rows.size()));
  }
  KeyMatrix keys(series.periods(), series.member_count());
  for (Eigen::Index t = 0; t < series.periods(); ++t) {
    const std::vector<std::string>& row = table.rows[t];
    const std::string where = path + ", row " + std::to_string(t + 2);
    const EpochSeconds stamp = parse_timestamp(row[0], assumed_offset_minutes);
    if (stamp != series.grid.timestamp(t)) {
      throw InputError(where + ": timestamp does not match the meter grid");
    }
    for (Eigen::Index i = 0; i < series.member_count(); ++i) {
      keys(t, i) = csv::parse_number(row[i + 1], where + ", column '" + series.members[i] + "'");
    }
  }
  validate_keys(keys, series);
  return keys;
}

KeyMatrix make_keys(KeyStrategyKind kind, const MeterSeries& series, const std::string& path,
                    int assumed_offset_minutes) {
  switch (kind) {
    case KeyStrategyKind::Uniform:
      return uniform_keys(series);
    case KeyStrategyKind::ProportionalStatic:
      return proportional_static_keys(series);
    case KeyStrategyKind::ProportionalDynamic:
      return proportional_dynamic_keys(series);
    case KeyStrategyKind::Explicit:
      if (path.empty()) {
        throw InputError("explicit key strategy needs a key file");
      }
      return explicit_keys(path, series, assumed_offset_minutes);
  }
  throw InputError("unreachable key strategy");
}

}  // namespace rec
