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

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "rec/common.hpp"
#include "rec/csv.hpp"
#include "rec/keygen.hpp"
#include "rec/metering.hpp"
#include "support/instances.hpp"

namespace {

using doctest::Contains;
using rec::testsupport::golden_series;

std::string write_key_file(const std::string& name, const std::vector<std::string>& lines) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "recsettle_tests";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / name).string();
  rec::csv::write_lines(path, lines);
  return path;
}

}  // namespace

TEST_SUITE("keygen") {
  TEST_CASE("strategy names parse") {
    CHECK(rec::parse_key_strategy("uniform") == rec::KeyStrategyKind::Uniform);
    CHECK(rec::parse_key_strategy("proportional-static") ==
          rec::KeyStrategyKind::ProportionalStatic);
    CHECK(rec::parse_key_strategy("proportional-dynamic") ==
          rec::KeyStrategyKind::ProportionalDynamic);
    CHECK(rec::parse_key_strategy("explicit") == rec::KeyStrategyKind::Explicit);
    CHECK_THROWS_WITH_AS(rec::parse_key_strategy("static"), Contains("unknown key strategy"),
                         rec::InputError);
  }

  TEST_CASE("proportional-static keys on the two-period community") {
    const rec::MeterSeries series = golden_series();
    const rec::KeyMatrix keys = rec::proportional_static_keys(series);
    REQUIRE(keys.rows() == 2);
    REQUIRE(keys.cols() == 4);
    // Net demand totals are (0.38, 0.44, 0, 0.08) over a community total of 0.90.
    for (Eigen::Index t = 0; t < 2; ++t) {
      CHECK(keys(t, 0) == doctest::Approx(19.0 / 45.0).epsilon(1e-12));
      CHECK(keys(t, 1) == doctest::Approx(22.0 / 45.0).epsilon(1e-12));
      CHECK(keys(t, 2) == 0.0);
      CHECK(keys(t, 3) == doctest::Approx(4.0 / 45.0).epsilon(1e-12));
    }
    CHECK_NOTHROW(rec::validate_keys(keys, series));
  }

  TEST_CASE("proportional-dynamic keys follow each period's demand") {
    const rec::MeterSeries series = golden_series();
    const rec::KeyMatrix keys = rec::proportional_dynamic_keys(series);
    CHECK(keys(0, 0) == doctest::Approx(0.17 / 0.46).epsilon(1e-12));
    CHECK(keys(0, 3) == doctest::Approx(0.08 / 0.46).epsilon(1e-12));
    CHECK(keys(1, 0) == doctest::Approx(0.21 / 0.44).epsilon(1e-12));
    CHECK(keys(1, 3) == 0.0);
    CHECK(keys.row(0).sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(keys.row(1).sum() == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("uniform keys split each period over its net consumers") {
    const rec::MeterSeries series = golden_series();
    const rec::KeyMatrix keys = rec::uniform_keys(series);
    CHECK(keys(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(keys(0, 2) == 0.0);
    CHECK(keys(0, 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(keys(1, 0) == 0.5);
    CHECK(keys(1, 3) == 0.0);  // a net producer in the second period
  }

  TEST_CASE("periods without consumers get all-zero rows") {
    rec::PeriodGrid grid;
    grid.start = 1488326400;
    grid.cadence = 900;
    grid.count = 1;
    Eigen::MatrixXd consumption = Eigen::MatrixXd::Zero(1, 2);
    Eigen::MatrixXd production(1, 2);
    production << 0.4, 0.0;
    const rec::MeterSeries series =
        rec::MeterSeries::from_raw(grid, {"A", "B"}, consumption, production);
    CHECK(rec::uniform_keys(series).isZero());
    CHECK(rec::proportional_dynamic_keys(series).isZero());
    CHECK_THROWS_WITH_AS(rec::proportional_static_keys(series), Contains("positive total"),
                         rec::InputError);
  }

  TEST_CASE("generated keys validate on random communities") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 25; ++round) {
      const rec::MeterSeries series = rec::testsupport::random_series(
          rng, rec::testsupport::uniform_int(rng, 1, 8),
          rec::testsupport::uniform_int(rng, 2, 6));
      CHECK_NOTHROW(rec::validate_keys(rec::uniform_keys(series), series));
      CHECK_NOTHROW(rec::validate_keys(rec::proportional_dynamic_keys(series), series));
      if (series.net_consumption.sum() > 0.0) {
        CHECK_NOTHROW(rec::validate_keys(rec::proportional_static_keys(series), series));
      }
    }
  }

  TEST_CASE("validate_keys rejects malformed matrices") {
    const rec::MeterSeries series = golden_series();
    rec::KeyMatrix keys = rec::proportional_static_keys(series);

    CHECK_THROWS_WITH_AS(rec::validate_keys(keys.topRows(1), series), Contains("shape"),
                         rec::InputError);

    rec::KeyMatrix negative = keys;
    negative(0, 0) = -0.01;
    CHECK_THROWS_WITH_AS(rec::validate_keys(negative, series), Contains("[0, 1]"),
                         rec::InputError);

    rec::KeyMatrix oversum = keys;
    oversum(1, 2) = 0.5;  // pushes the second row's sum past one
    CHECK_THROWS_WITH_AS(rec::validate_keys(oversum, series),
                         Contains("2017-03-01T00:15:00Z"), rec::InputError);

    rec::KeyMatrix nan = keys;
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH_AS(rec::validate_keys(nan, series), Contains("non-finite"),
                         rec::InputError);

    // Row sums strictly below one are fine: members may leave production unallocated.
    rec::KeyMatrix undersum = keys * 0.5;
    CHECK_NOTHROW(rec::validate_keys(undersum, series));
  }

  TEST_CASE("explicit keys load from file") {
    const rec::MeterSeries series = golden_series();
    const std::string path = write_key_file(
        "keys_ok.csv", {"timestamp,User1,User2,User3,User4",
                        "2017-03-01 00:00,0.25,0.25,0.25,0.25",
                        "2017-03-01 00:15,0.40,0.60,0.00,0.00"});
    const rec::KeyMatrix keys = rec::explicit_keys(path, series);
    CHECK(keys(0, 2) == 0.25);
    CHECK(keys(1, 1) == 0.60);

    const rec::KeyMatrix via_make =
        rec::make_keys(rec::KeyStrategyKind::Explicit, series, path);
    CHECK(via_make == keys);
  }

  TEST_CASE("explicit keys enforce the meter schema") {
    const rec::MeterSeries series = golden_series();

    const std::string reordered = write_key_file(
        "keys_reordered.csv", {"timestamp,User2,User1,User3,User4",
                               "2017-03-01 00:00,0.25,0.25,0.25,0.25",
                               "2017-03-01 00:15,0.25,0.25,0.25,0.25"});
    CHECK_THROWS_WITH_AS(rec::explicit_keys(reordered, series), Contains("expected 'User1'"),
                         rec::InputError);

    const std::string short_file = write_key_file(
        "keys_short.csv", {"timestamp,User1,User2,User3,User4",
                           "2017-03-01 00:00,0.25,0.25,0.25,0.25"});
    CHECK_THROWS_WITH_AS(rec::explicit_keys(short_file, series), Contains("expected 2 data rows"),
                         rec::InputError);

    const std::string shifted = write_key_file(
        "keys_shifted.csv", {"timestamp,User1,User2,User3,User4",
                             "2017-03-01 00:00,0.25,0.25,0.25,0.25",
                             "2017-03-01 00:30,0.25,0.25,0.25,0.25"});
    CHECK_THROWS_WITH_AS(rec::explicit_keys(shifted, series),
                         Contains("timestamp does not match"), rec::InputError);

    const std::string oversold = write_key_file(
        "keys_oversold.csv", {"timestamp,User1,User2,User3,User4",
                              "2017-03-01 00:00,0.50,0.50,0.50,0.25",
                              "2017-03-01 00:15,0.25,0.25,0.25,0.25"});
    CHECK_THROWS_AS(rec::explicit_keys(oversold, series), rec::InputError);

    CHECK_THROWS_WITH_AS(
        rec::make_keys(rec::KeyStrategyKind::Explicit, series, ""),
        Contains("needs a key file"), rec::InputError);
  }
}
