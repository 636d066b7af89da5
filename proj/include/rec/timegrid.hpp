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

#ifndef RECSETTLE_TIMEGRID_HPP_
#define RECSETTLE_TIMEGRID_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rec {

//Seconds since 1970-01-01T00:00:00Z on the proleptic Gregorian calendar.
using EpochSeconds = std::int64_t;

// Parses an ISO 8601 timestamp: "YYYY-MM-DD[T ]HH:MM[:SS][Z|±HH:MM]".
// Inputs without an explicit zone are interpreted as UTC shifted by
// `assumed_offset_minutes` (zero by default, i.e. plain UTC).  Throws
// InputError on malformed text or out-of-range fields.
EpochSeconds parse_timestamp(const std::string& text, int assumed_offset_minutes = 0);

// Formats a timestamp as "YYYY-MM-DDTHH:MM:SSZ" (always UTC).
std::string format_timestamp(EpochSeconds t);

// A reporting period: `count` consecutive metering periods of `cadence`
// seconds starting at `start`.  Period index t maps to start + t * cadence.
struct PeriodGrid {
  EpochSeconds start = 0;
  std::int64_t cadence = 900;  // meter resolution, 15 minutes by default
  std::int64_t count = 0;

  EpochSeconds timestamp(std::int64_t t) const { return start + t * cadence; }

  // Validates count >= 1 and cadence > 0; throws InputError otherwise.
  void validate() const;
};

// Derives the grid spanned by an ordered timestamp column.  The column must
// be strictly increasing and uniformly spaced; violations name the offending
// row (1-based, counting the header as row 1).
PeriodGrid infer_grid(const std::vector<EpochSeconds>& stamps);

}  // namespace rec

#endif  // RECSETTLE_TIMEGRID_HPP_
