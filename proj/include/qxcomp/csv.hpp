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

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace qxcomp::csv {

inline constexpr std::string_view kSchemaLine = "# qxcomp-schema v1";

/// Shortest round-trip decimal; +infinity renders as "inf".
std::string format_double(double x);
double parse_double(std::string_view field);

std::vector<std::string> split_fields(std::string_view line);

/// Lines of a versioned CSV document after the schema comment, with the
/// header row checked against `expected_header`. Throws ParseError.
std::vector<std::vector<std::string>> read_rows(std::string_view text,
                                                std::string_view expected_header);

}  // namespace qxcomp::csv
