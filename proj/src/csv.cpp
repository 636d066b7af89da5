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

#include "rec/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rec/common.hpp"

namespace rec::csv {
namespace {

std::vector<std::string> split_line(const std::string& line, const std::string& path,
                                    std::size_t row) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c == '"') {
      throw InputError(path + ", row " + std::to_string(row) +
                       ": quoted cells are not supported in this format");
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  // Trim ASCII whitespace around each cell; embedded spaces stay intact.
  for (std::string& c : cells) {
    std::size_t b = c.find_first_not_of(" \t");
    std::size_t e = c.find_last_not_of(" \t");
    c = (b == std::string::npos) ? std::string() : c.substr(b, e - b + 1);
  }
  return cells;
}

}  // namespace

Table read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open file '" + path + "'");
  }
  Table table;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;  // ignore blank lines (commonly a trailing one)
    }
    std::vector<std::string> cells = split_line(line, path, row);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw InputError(path + ", row " + std::to_string(row) + ": expected " +
                       std::to_string(table.header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) {
    throw InputError("file '" + path + "' is empty (missing header row)");
  }
  return table;
}

double parse_number(const std::string& cell, const std::string& context) {
  if (cell.empty()) {
    throw InputError(context + ": missing value");
  }
  // Accept the ASCII minus and the UTF-8 minus sign U+2212, which shows up in
  // typeset tables copied into data files.
  std::string normalized = cell;
  const std::string utf8_minus = "\xe2\x88\x92";
  if (normalized.rfind(utf8_minus, 0) == 0) {
    normalized = "-" + normalized.substr(utf8_minus.size());
  }
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(normalized, &used);
  } catch (const std::exception&) {
    throw InputError(context + ": '" + cell + "' is not a number");
  }
  if (used != normalized.size()) {
    throw InputError(context + ": '" + cell + "' has trailing characters");
  }
  if (!std::isfinite(value)) {
    throw InputError(context + ": '" + cell + "' is not finite");
  }
  return value;
}

std::string format_fixed(double value, int digits) {
  // Avoid the "-0.000000" artifact for exact zeros and tiny negative noise
  // that rounds to zero at the requested precision.
  double rounded = value;
  const double scale = std::pow(10.0, digits);
  if (std::nearbyint(value * scale) == 0.0) {
    rounded = 0.0;
  }
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, rounded);
  return buffer;
}

std::string format_roundtrip(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw InputError("number formatting failed");
  }
  return std::string(buffer, ptr);
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("cannot write file '" + path + "'");
  }
  for (const std::string& line : lines) {
    out << line << '\n';
  }
  if (!out) {
    throw InputError("write to '" + path + "' failed");
  }
}

}  // namespace rec::csv
