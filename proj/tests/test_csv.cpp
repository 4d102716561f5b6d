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

#include "chatmos/csv.hpp"

#include <filesystem>
#include <random>
#include <string>

#include <doctest.h>

#include "chatmos/errors.hpp"

using namespace chatmos;

TEST_CASE("plain fields parse") {
  const CsvTable t = parse_csv("a,b,c\n1,2,3\n4,5,6\n");
  CHECK(t.header == CsvRow{"a", "b", "c"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0] == CsvRow{"1", "2", "3"});
  CHECK(t.rows[1] == CsvRow{"4", "5", "6"});
}

TEST_CASE("quoted fields keep commas, quotes, and newlines") {
  const CsvTable t =
      parse_csv("text,n\n\"hello, world\",1\n\"he said \"\"hi\"\"\",2\n"
                "\"line\nbreak\",3\n");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0][0] == "hello, world");
  CHECK(t.rows[1][0] == "he said \"hi\"");
  CHECK(t.rows[2][0] == "line\nbreak");
}

TEST_CASE("CRLF and missing trailing newline are tolerated") {
  const CsvTable a = parse_csv("a,b\r\n1,2\r\n");
  CHECK(a.rows[0] == CsvRow{"1", "2"});
  const CsvTable b = parse_csv("a,b\n1,2");
  CHECK(b.rows[0] == CsvRow{"1", "2"});
}

TEST_CASE("width mismatch is an error") {
  CHECK_THROWS_AS(parse_csv("a,b\n1,2,3\n"), CsvError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), CsvError);
}

TEST_CASE("unterminated quote is an error") {
  CHECK_THROWS_AS(parse_csv("a\n\"oops\n"), CsvError);
}

TEST_CASE("column lookup") {
  const CsvTable t = parse_csv("x,y\n1,2\n");
  CHECK(t.column("x") == 0);
  CHECK(t.column("y") == 1);
  CHECK_THROWS_AS(t.column("z"), CsvError);
}

TEST_CASE("escape and join round-trip through the parser") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "ab,\"\n\r x";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 300; ++trial) {
    CsvRow row;
    for (int f = 0; f < 3; ++f) {
      std::string field;
      const int n = len(rng);
      for (int i = 0; i < n; ++i) field += alphabet[pick(rng)];
      row.push_back(field);
    }
    const std::string doc = "c1,c2,c3\n" + csv_join(row) + "\n";
    const CsvTable t = parse_csv(doc);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0] == row);
  }
}

TEST_CASE("file write then read returns the same table") {
  const auto path =
      std::filesystem::temp_directory_path() / "chatmos_csv_test.csv";
  const CsvRow header = {"isp", "comment"};
  const std::vector<CsvRow> rows = {{"ISP1", "has, comma"},
                                    {"ISP2", "has \"quote\""}};
  write_csv_file(path, header, rows);
  const CsvTable t = read_csv_file(path);
  CHECK(t.header == header);
  CHECK(t.rows == rows);
  std::filesystem::remove(path);
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS_AS(read_csv_file("/nonexistent/chatmos.csv"), CsvError);
}

TEST_CASE("format_double is shortest exact round-trip") {
  CHECK(format_double(3.64) == "3.64");
  CHECK(format_double(-0.4) == "-0.4");
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = dist(rng);
    CHECK(std::stod(format_double(v)) == v);
  }
}
