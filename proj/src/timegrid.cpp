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

#include "rec/timegrid.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "rec/common.hpp"

namespace rec {
namespace {

// Days between 1970-01-01 and y-m-d on the proleptic Gregorian calendar.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool leap(std::int64_t y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays = {31, 28, 31, 30, 31, 30,
                                                     31, 31, 30, 31, 30, 31};
  return (m == 2 && leap(y)) ? 29 : kDays[m - 1];
}

// Parses exactly `width` decimal digits starting at text[pos].
int parse_digits(const std::string& text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) {
    throw InputError("timestamp '" + text + "' is truncated");
  }
  int value = 0;
  const char* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + width, value);
  if (ec != std::errc() || ptr != first + width) {
    throw InputError("timestamp '" + text + "' has a non-numeric field");
  }
  return value;
}

void expect_char(const std::string& text, std::size_t pos, char a, char b) {
  if (pos >= text.size() || (text[pos] != a && text[pos] != b)) {
    throw InputError("timestamp '" + text + "' is not ISO 8601 (expected '" +
                     std::string(1, a) + "')");
  }
}

}  // namespace

EpochSeconds parse_timestamp(const std::string& text, int assumed_offset_minutes) {
  // Fixed prefix: YYYY-MM-DD[T ]HH:MM
  const int year = parse_digits(text, 0, 4);
  expect_char(text, 4, '-', '-');
  const int month = parse_digits(text, 5, 2);
  expect_char(text, 7, '-', '-');
  const int day = parse_digits(text, 8, 2);
  expect_char(text, 10, 'T', ' ');
  const int hour = parse_digits(text, 11, 2);
  expect_char(text, 13, ':', ':');
  const int minute = parse_digits(text, 14, 2);

  std::size_t pos = 16;
  int second = 0;
  if (pos < text.size() && text[pos] == ':') {
    second = parse_digits(text, pos + 1, 2);
    pos += 3;
  }

  int zone_minutes = assumed_offset_minutes;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z') {
      zone_minutes = 0;
      pos += 1;
    } else if (c == '+' || c == '-') {
      const int zh = parse_digits(text, pos + 1, 2);
      expect_char(text, pos + 3, ':', ':');
      const int zm = parse_digits(text, pos + 4, 2);
      zone_minutes = (c == '+' ? 1 : -1) * (zh * 60 + zm);
      pos += 6;
    }
  }
  if (pos != text.size()) {
    throw InputError("timestamp '" + text + "' has trailing characters");
  }

  if (month < 1 || month > 12) {
    throw InputError("timestamp '" + text + "' has month out of range");
  }
  if (day < 1 || day > static_cast<int>(days_in_month(year, month))) {
    throw InputError("timestamp '" + text + "' has day out of range");
  }
  if (hour > 23 || minute > 59 || second > 59 || hour < 0 || minute < 0 || second < 0) {
    throw InputError("timestamp '" + text + "' has time of day out of range");
  }

  const std::int64_t days = days_from_civil(year, month, day);
  return days * 86400 + hour * 3600 + minute * 60 + second -
         static_cast<std::int64_t>(zone_minutes) * 60;
}

std::string format_timestamp(EpochSeconds t) {
  std::int64_t days = t / 86400;
  std::int64_t sod = t % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  std::int64_t year = 0;
  unsigned month = 0;
  unsigned day = 0;
  civil_from_days(days, year, month, day);
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(year), month, day,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod / 60) % 60),
                static_cast<long long>(sod % 60));
  return buffer;
}

void PeriodGrid::validate() const {
  if (count < 1) {
    throw InputError("period grid needs at least one period");
  }
  if (cadence <= 0) {
    throw InputError("period grid cadence must be positive");
  }
}

PeriodGrid infer_grid(const std::vector<EpochSeconds>& stamps) {
  if (stamps.empty()) {
    throw InputError("no data rows: cannot infer a period grid");
  }
  PeriodGrid grid;
  grid.start = stamps.front();
  grid.count = static_cast<std::int64_t>(stamps.size());
  grid.cadence = stamps.size() > 1 ? stamps[1] - stamps[0] : 900;
  if (grid.cadence <= 0) {
    throw InputError("row 3: timestamp does not increase");
  }
  for (std::size_t t = 0; t < stamps.size(); ++t) {
    const EpochSeconds expected = grid.start + static_cast<std::int64_t>(t) * grid.cadence;
    if (stamps[t] != expected) {
      throw InputError("row " + std::to_string(t + 2) + ": timestamp " +
                       format_timestamp(stamps[t]) + " breaks the uniform grid (expected " +
                       format_timestamp(expected) + ")");
    }
  }
  return grid;
}

}  // namespace rec
