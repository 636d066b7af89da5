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

#include "rec/lp/mps.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "rec/common.hpp"

namespace rec::lp {
namespace {

std::string row_name(std::int64_t r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "R%07lld", static_cast<long long>(r + 1));
  return buf;
}

std::string col_name(std::int64_t c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "C%07lld", static_cast<long long>(c + 1));
  return buf;
}

// Fixed MPS value fields are 12 characters wide; %.5E keeps a sign, six
// significant digits and the exponent within that budget.
std::string value_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.5E", v);
  return buf;
}

void data_line(std::string& out, const std::string& field2,
               const std::string& field3, double value) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "    %-8s  %-8s  %-12s\n", field2.c_str(),
                field3.c_str(), value_text(value).c_str());
  out += buf;
}

void bound_line(std::string& out, const char* kind, const std::string& column,
                const double* value) {
  char buf[80];
  if (value == nullptr) {
    std::snprintf(buf, sizeof(buf), " %-2s %-8s  %-8s\n", kind, "BND", column.c_str());
  } else {
    std::snprintf(buf, sizeof(buf), " %-2s %-8s  %-8s  %-12s\n", kind, "BND",
                  column.c_str(), value_text(*value).c_str());
  }
  out += buf;
}

}  // namespace

std::string to_mps(const Model& model, const std::string& name) {
  const std::int64_t m = model.row_count();
  const std::int64_t n = model.variable_count();

  std::string out;
  out.reserve(static_cast<std::size_t>(64 * (m + n) + 48 * model.nonzero_count()));
  out += "NAME          " + name + "\n";

  out += "ROWS\n";
  out += " N  COST\n";
  for (std::int64_t r = 0; r < m; ++r) {
    const char* kind = "E ";
    switch (model.relations()[r]) {
      case Relation::LessEqual: kind = "L "; break;
      case Relation::Equal: kind = "E "; break;
      case Relation::GreaterEqual: kind = "G "; break;
    }
    out += " ";
    out += kind;
    out += " " + row_name(r) + "\n";
  }

  // Column-major traversal of the row-major storage.
  const auto& row_start = model.row_start();
  const auto& cols = model.column_index();
  const auto& vals = model.values();
  std::vector<std::int64_t> col_start(static_cast<std::size_t>(n) + 1, 0);
  for (const std::int32_t j : cols) col_start[static_cast<std::size_t>(j) + 1] += 1;
  for (std::int64_t j = 0; j < n; ++j) col_start[j + 1] += col_start[j];
  std::vector<std::int32_t> entry_row(cols.size());
  std::vector<double> entry_value(vals.size());
  std::vector<std::int64_t> next(col_start.begin(), col_start.end() - 1);
  for (std::int64_t r = 0; r < m; ++r) {
    for (std::int64_t p = row_start[r]; p < row_start[r + 1]; ++p) {
      const std::int64_t q = next[cols[p]]++;
      entry_row[q] = static_cast<std::int32_t>(r);
      entry_value[q] = vals[p];
    }
  }

  out += "COLUMNS\n";
  for (std::int64_t j = 0; j < n; ++j) {
    const std::string cname = col_name(j);
    if (model.costs()[j] != 0.0) data_line(out, cname, "COST", model.costs()[j]);
    for (std::int64_t p = col_start[j]; p < col_start[j + 1]; ++p) {
      data_line(out, cname, row_name(entry_row[p]), entry_value[p]);
    }
  }

  out += "RHS\n";
  for (std::int64_t r = 0; r < m; ++r) {
    if (model.rhs()[r] != 0.0) data_line(out, "RHS", row_name(r), model.rhs()[r]);
  }

  out += "BOUNDS\n";
  for (std::int64_t j = 0; j < n; ++j) {
    const std::string cname = col_name(j);
    const double lo = model.lower()[j];
    const double hi = model.upper()[j];
    if (lo == hi) {
      bound_line(out, "FX", cname, &lo);
      continue;
    }
    if (std::isfinite(lo)) {
      bound_line(out, "LO", cname, &lo);
    } else {
      bound_line(out, "MI", cname, nullptr);
    }
    if (std::isfinite(hi)) {
      bound_line(out, "UP", cname, &hi);
    } else {
      bound_line(out, "PL", cname, nullptr);
    }
  }

  out += "ENDATA\n";
  return out;
}

void write_mps(const Model& model, const std::string& path, const std::string& name) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw InputError("cannot create MPS file '" + path + "'");
  }
  file << to_mps(model, name);
  if (!file.good()) {
    throw InputError("failed while writing MPS file '" + path + "'");
  }
}

}  // namespace rec::lp
