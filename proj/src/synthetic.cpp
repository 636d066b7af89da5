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

#include "rec/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "rec/common.hpp"
#include "rec/timegrid.hpp"

namespace rec {
namespace {

// Gaussian-ish bump centered on `center` hours, used for the morning and
// evening consumption peaks.
double bump(double hour, double center) {
  const double d = hour - center;
  return std::exp(-d * d / 4.5);
}

}  // namespace

MeterSeries synthetic_community(int periods, int members, std::uint64_t seed) {
  if (periods < 1 || members < 1) {
    throw InputError("synthetic community needs at least one period and one member");
  }
  PeriodGrid grid{parse_timestamp("2026-03-01T00:00"), 900, periods};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> base(members), morning(members), evening(members), solar_kw(members);
  for (int i = 0; i < members; ++i) {
    base[i] = 0.04 + 0.20 * unit(rng);       // kWh per 15 minutes
    morning[i] = 0.5 + unit(rng);
    evening[i] = 0.5 + unit(rng);
    const double draw = unit(rng);
    if (draw < 0.30) {
      solar_kw[i] = 0.0;                     // no panels: depends on allocations
    } else if (draw < 0.75) {
      solar_kw[i] = 1.0 + 3.0 * unit(rng);   // small rooftop array
    } else {
      solar_kw[i] = 4.0 + 6.0 * unit(rng);   // large prosumer array
    }
  }

  std::vector<std::string> names(members);
  for (int i = 0; i < members; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "M%03d", i + 1);
    names[i] = buf;
  }

  Eigen::MatrixXd consumption(periods, members), production(periods, members);
  for (int t = 0; t < periods; ++t) {
    const double hour = static_cast<double>(t % 96) / 4.0;
    const double daylight = hour > 6.0 && hour < 18.0
                                ? std::sin(M_PI * (hour - 6.0) / 12.0)
                                : 0.0;
    for (int i = 0; i < members; ++i) {
      const double shape = 1.0 + morning[i] * bump(hour, 8.0) + evening[i] * bump(hour, 20.0);
      consumption(t, i) = base[i] * shape * (0.8 + 0.4 * unit(rng));
      production(t, i) = solar_kw[i] * daylight * 0.25 * (0.7 + 0.3 * unit(rng));
    }
  }

  return MeterSeries::from_raw(grid, std::move(names), std::move(consumption),
                               std::move(production));
}

}  // namespace rec
