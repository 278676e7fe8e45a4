// Copyright 2026 The qxcomp Authors
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

#include "qxcomp/csv.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "qxcomp/error.hpp"

namespace qxcomp::csv {

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) throw Error(ErrorCode::InvalidArgument, "refusing to serialize NaN");
  return fmt::format("{}", x);
}

double parse_double(std::string_view field) {
  if (field == "inf") return std::numeric_limits<double>::infinity();
  if (field == "-inf") return -std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, "not a number: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::vector<std::vector<std::string>> read_rows(std::string_view text,
                                                std::string_view expected_header) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.size() < 2 || lines[0] != kSchemaLine) {
    throw Error(ErrorCode::ParseError, "missing schema line '" + std::string(kSchemaLine) + "'");
  }
  if (lines[1] != expected_header) {
    throw Error(ErrorCode::ParseError, "unexpected header '" + std::string(lines[1]) + "'");
  }
  const std::size_t width = split_fields(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto fields = split_fields(lines[i]);
    if (fields.size() != width) {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i - 1) + " has " +
                                             std::to_string(fields.size()) + " fields, expected " +
                                             std::to_string(width));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace qxcomp::csv
