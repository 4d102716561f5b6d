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

#include <charconv>
#include <fstream>
#include <sstream>

#include "chatmos/errors.hpp"

namespace chatmos {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw CsvError("missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  std::vector<CsvRow> all;
  CsvRow row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // row has at least one field begun

  std::size_t i = 0;
  const std::size_t n = text.size();
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = true;
  };
  auto end_row = [&] {
    end_field();
    all.push_back(std::move(row));
    row.clear();
    field_started = false;
  };

  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        field += c;
        ++i;
      }
    } else if (c == '"') {
      in_quotes = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < n && text[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (c == '\n' || c == '\r') {
      end_row();
      ++i;
    } else {
      field += c;
      ++i;
    }
  }
  if (in_quotes) throw CsvError("unterminated quoted field");
  if (!field.empty() || field_started || !row.empty()) end_row();

  CsvTable table;
  if (all.empty()) return table;
  table.header = std::move(all.front());
  for (std::size_t r = 1; r < all.size(); ++r) {
    if (all[r].size() != table.header.size()) {
      throw CsvError("row " + std::to_string(r) + " has " +
                     std::to_string(all[r].size()) + " fields, expected " +
                     std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(all[r]));
  }
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string csv_escape(std::string_view field) {
  bool needs_quotes = false;
  for (char c : field) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') {
      needs_quotes = true;
      break;
    }
  }
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_join(const CsvRow& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(row[i]);
  }
  return out;
}

void write_csv_file(const std::filesystem::path& path, const CsvRow& header,
                    const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write '" + path.string() + "'");
  out << csv_join(header) << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size()) {
      throw CsvError("row width " + std::to_string(row.size()) +
                     " != header width " + std::to_string(header.size()));
    }
    out << csv_join(row) << '\n';
  }
  if (!out) throw CsvError("write failed for '" + path.string() + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace chatmos
