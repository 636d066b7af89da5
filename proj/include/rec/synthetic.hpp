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
//
// Deterministic synthetic community data for benchmarks and demonstrations.

#ifndef RECSETTLE_SYNTHETIC_HPP_
#define RECSETTLE_SYNTHETIC_HPP_

#include <cstdint>

#include "rec/metering.hpp"

namespace rec {

// Generates a community of household profiles on a 15-minute grid starting
// 2026-03-01T00:00Z: double-peaked consumption, and rooftop solar on a
// majority of members with mixed sizes (some members have none, which
// spreads the self-supply rates).  A fixed seed gives a bit-identical
// series on every call.
MeterSeries synthetic_community(int periods, int members, std::uint64_t seed);

}  // namespace rec

#endif  // RECSETTLE_SYNTHETIC_HPP_
