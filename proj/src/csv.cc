// Copyright 2026 The evperf Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evperf/data_pipeline.h"
#include "evperf/errors.h"

namespace evperf {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto begin = s.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(kSpace);
  return s.substr(begin, end - begin + 1);
}

// Splits CSV text into rows of fields. Double-quoted fields may contain
// commas, doubled quotes and line breaks.
std::vector<std::vector<std::string>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (row_has_content) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row_has_content = true;
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        if (c != ' ' && c != '\t') row_has_content = true;
        field.push_back(c);
    }
  }
  if (in_quotes) throw InputError("unterminated quoted field in CSV input");
  end_row();
  return rows;
}

enum class CellStatus { kEmpty, kValue, kInvalid };

CellStatus parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return CellStatus::kEmpty;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || !std::isfinite(out)) {
    return CellStatus::kInvalid;
  }
  return CellStatus::kValue;
}

// Applies per-column value invariants; false means the value is rejected.
bool valid_for_column(std::string_view column, double value) {
  if (column == columns::kNumberOfCells) {
    return value >= 1.0 && value == std::floor(value) && value < 9.0e15;
  }
  if (column == columns::kAcceleration) return value > 0.0;
  return true;
}

void append_number(std::string& out, double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

std::string escape_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

HeaderAliases parse_header_aliases(std::string_view text) {
  HeaderAliases aliases;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("alias table line " + std::to_string(line_no) +
                       ": expected 'source header = canonical_name'");
    }
    const auto source = trim(line.substr(0, eq));
    const auto target = trim(line.substr(eq + 1));
    if (source.empty() || target.empty()) {
      throw InputError("alias table line " + std::to_string(line_no) +
                       ": empty header name");
    }
    aliases.insert_or_assign(std::string(source), std::string(target));
  }
  return aliases;
}

HeaderAliases load_header_aliases(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open alias table: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_header_aliases(text);
}

CsvLoadResult read_csv(std::istream& in,
                       std::span<const std::string> required_columns,
                       const HeaderAliases& aliases) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  auto rows = tokenize(text);
  if (rows.empty()) throw InputError("CSV input has no header row");

  CsvLoadResult result;
  std::set<std::string, std::less<>> seen;
  for (const auto& raw : rows.front()) {
    std::string name(trim(raw));
    if (auto it = aliases.find(name); it != aliases.end()) name = it->second;
    if (name.empty()) throw InputError("CSV header contains an empty name");
    if (!seen.insert(name).second) {
      throw InputError("duplicate CSV header column '" + name + "'");
    }
    result.columns.push_back(std::move(name));
  }
  for (const auto& req : required_columns) {
    if (!seen.contains(req)) {
      throw InputError("CSV input is missing required column '" + req + "'");
    }
  }

  result.records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() > result.columns.size()) ++result.parse_warnings;
    VehicleRecord record;
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
      const auto& column = result.columns[c];
      std::optional<double> value;
      if (c < row.size()) {
        double parsed = 0.0;
        switch (parse_number(row[c], parsed)) {
          case CellStatus::kEmpty:
            break;
          case CellStatus::kValue:
            if (valid_for_column(column, parsed)) {
              value = parsed;
            } else {
              ++result.parse_warnings;
            }
            break;
          case CellStatus::kInvalid:
            ++result.parse_warnings;
            break;
        }
      }
      record.set(column, value);
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

CsvLoadResult load_csv(const std::filesystem::path& path,
                       std::span<const std::string> required_columns,
                       const HeaderAliases& aliases) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open CSV file: " + path.string());
  return read_csv(in, required_columns, aliases);
}

void write_records_csv(std::ostream& out,
                       std::span<const VehicleRecord> records,
                       std::span<const std::string> columns) {
  std::string line;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) line.push_back(',');
    line += escape_field(columns[c]);
  }
  line.push_back('\n');
  out << line;
  for (const auto& record : records) {
    line.clear();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) line.push_back(',');
      if (const auto v = record.get(columns[c])) append_number(line, *v);
    }
    line.push_back('\n');
    out << line;
  }
}

}  // namespace evperf
