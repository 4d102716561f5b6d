// Copyright 2026 The chatmos Authors.
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

#include "chatmos/time_utils.hpp"

#include <random>
#include <stdexcept>

#include <doctest.h>

using namespace chatmos;

TEST_CASE("parse_instant reads ISO 8601 seconds") {
  const Instant t = parse_instant("2024-01-01T12:00:00");
  CHECK(t.time_since_epoch().count() == 1704110400);
}

TEST_CASE("parse_instant accepts a space separator") {
  CHECK(parse_instant("2024-01-01 12:00:00") ==
        parse_instant("2024-01-01T12:00:00"));
}

TEST_CASE("epoch is zero") {
  CHECK(parse_instant("1970-01-01T00:00:00").time_since_epoch().count() == 0);
}

TEST_CASE("format_instant emits the T separator") {
  CHECK(format_instant(parse_instant("2024-01-01 12:00:00")) ==
        "2024-01-01T12:00:00");
  CHECK(format_instant(Instant{}) == "1970-01-01T00:00:00");
}

TEST_CASE("leap day validation") {
  CHECK(format_instant(parse_instant("2024-02-29T06:30:15")) ==
        "2024-02-29T06:30:15");
  CHECK_THROWS_AS(parse_instant("2023-02-29T06:30:15"), std::invalid_argument);
}

TEST_CASE("malformed timestamps are rejected") {
  CHECK_THROWS_AS(parse_instant(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("garbage"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-01-01"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-13-01T00:00:00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-00-10T00:00:00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-02-30T00:00:00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-01-01T24:00:00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-01-01T00:60:00"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instant("2024-01-01T00:00:61"), std::invalid_argument);
}

TEST_CASE("format then parse is the identity over random instants") {
  std::mt19937_64 rng(7);
  // 1970..2199 keeps the draw inside the four-digit-year format.
  std::uniform_int_distribution<std::int64_t> dist(0, 7258118400LL);
  for (int i = 0; i < 2000; ++i) {
    const Instant t{Seconds{dist(rng)}};
    CHECK(parse_instant(format_instant(t)) == t);
  }
}
