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

#ifndef RECSETTLE_KEYGEN_HPP_
#define RECSETTLE_KEYGEN_HPP_

#include <Eigen/Core>
#include <string>

#include "rec/metering.hpp"

namespace rec {

// Initial repartition keys K[t][i]: the fraction of total injected net
// production contractually assigned to member i in period t.  Stored per
// (t,i) for every strategy so the data model is uniform.
using KeyMatrix = Eigen::MatrixXd;  // T x I, entries in [0,1], row sums <= 1

enum class KeyStrategyKind { Uniform, ProportionalStatic, ProportionalDynamic, Explicit };

// Parses "uniform" / "proportional-static" / "proportional-dynamic" /
// "explicit"; throws InputError on anything else.
KeyStrategyKind parse_key_strategy(const std::string& name);

// Checks 0 <= K <= 1 and row sums <= 1 + 1e-9; throws InputError otherwise.
void validate_keys(const KeyMatrix& keys, const MeterSeries& series);

// Equal shares over the members with positive net consumption in each
// period (allocating to net producers is always wasted); all-zero rows for
// periods without net consumers.
KeyMatrix uniform_keys(const MeterSeries& series);

// One static share per member, proportional to its average net demand over
// the reporting period.  Requires a positive total net consumption.
KeyMatrix proportional_static_keys(const MeterSeries& series);

// Period-by-period shares proportional to instantaneous net demand.
KeyMatrix proportional_dynamic_keys(const MeterSeries& series);

// Loads an explicit key file (CSV `timestamp,<member>,...` of fractions)
// matching the series' grid and member set; validates KeyMatrix invariants.
KeyMatrix explicit_keys(const std::string& path, const MeterSeries& series,
                        int assumed_offset_minutes = 0);

// Dispatches on the strategy kind; `path` is only consulted for Explicit.
KeyMatrix make_keys(KeyStrategyKind kind, const MeterSeries& series,
                    const std::string& path = "", int assumed_offset_minutes = 0);

}  // namespace rec

#endif  // RECSETTLE_KEYGEN_HPP_
