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

#ifndef CHATMOS_CSV_HPP_
#define CHATMOS_CSV_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace chatmos {

using CsvRow = std::vector<std::string>;

/// Header + data rows of one CSV file. Fields may contain commas, quotes
/// and newlines (RFC 4180 quoting).
struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;

  /// Index of a header column; throws CsvError if absent.
  std::size_t column(std::string_view name) const;
};

/// Parses a full CSV document. Throws CsvError on unbalanced quotes or
/// rows whose width differs from the header.
CsvTable parse_csv(std::string_view text);

CsvTable read_csv_file(const std::filesystem::path& path);

/// Quotes a field if it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

std::string csv_join(const CsvRow& row);

void write_csv_file(const std::filesystem::path& path, const CsvRow& header,
                    const std::vector<CsvRow>& rows);

/// Shortest decimal form that parses back to exactly the same double.
/// All numeric CSV output goes through this so reruns are byte-identical.
std::string format_double(double v);

}  // namespace chatmos

#endif  // CHATMOS_CSV_HPP_
