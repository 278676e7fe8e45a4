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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "qxcomp/error.hpp"

using namespace qxcomp;

TEST(Csv, doubles_round_trip_exactly) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = unit(rng);
    EXPECT_EQ(csv::parse_double(csv::format_double(x)), x);
  }
  EXPECT_EQ(csv::format_double(0.5), "0.5");
  EXPECT_EQ(csv::format_double(1.0), "1");
}

TEST(Csv, infinity_is_spelled_inf) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(csv::format_double(inf), "inf");
  EXPECT_EQ(csv::parse_double("inf"), inf);
  EXPECT_EQ(csv::parse_double("-inf"), -inf);
  EXPECT_THROW(csv::format_double(std::nan("")), Error);
}

TEST(Csv, rejects_garbage) {
  EXPECT_THROW(csv::parse_double("1.5x"), Error);
  EXPECT_THROW(csv::parse_double(""), Error);
}

TEST(Csv, split_keeps_empty_fields) {
  EXPECT_EQ(csv::split_fields("a,,b,"), (std::vector<std::string>{"a", "", "b", ""}));
}

TEST(Csv, read_rows_checks_schema_header_and_width) {
  const std::string good = std::string(csv::kSchemaLine) + "\na,b\n1,2\r\n3,4\n";
  const auto rows = csv::read_rows(good, "a,b");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][1], "4");
  EXPECT_THROW(csv::read_rows("a,b\n1,2\n", "a,b"), Error);
  EXPECT_THROW(csv::read_rows(good, "a,c"), Error);
  EXPECT_THROW(csv::read_rows(std::string(csv::kSchemaLine) + "\na,b\n1\n", "a,b"), Error);
}
