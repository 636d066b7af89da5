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

#ifndef RECSETTLE_CSV_HPP_
#define RECSETTLE_CSV_HPP_

#include <string>
#include <vector>

namespace rec::csv {

// A parsed comma-separated file: one header row plus data rows of equal
// width.  Cells are kept as raw text; numeric conversion happens at the
// consumer so errors can cite the exact row and column.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Reads a UTF-8, comma-separated file with a mandatory header row.  Handles
// CRLF line endings and a missing trailing newline; rejects ragged rows and
// quoted cells (member names are plain tokens in this format).
Table read_table(const std::string& path);

// Strict double conversion; `context` names the cell in errors, e.g.
// "row 4, column 'User2'".
double parse_number(const std::string& cell, const std::string& context);

// Fixed-point decimal rendering with `digits` fractional digits, used for all
// numeric CSV output so artifacts are byte-stable across runs.
std::string format_fixed(double value, int digits);

// Shortest decimal string that parses back to exactly `value`; used where a
// lossless round-trip matters more than column alignment (meter exports).
std::string format_roundtrip(double value);

// Writes `lines` (already joined rows, no trailing newline per entry) to
// `path`, one per line.  Throws InputError when the file cannot be opened.
void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace rec::csv

#endif  // RECSETTLE_CSV_HPP_
