// Copyright 2026 The dsest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsest/evaluate.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dsest/errors.h"
#include "dsest/protocols.h"

namespace dsest {
namespace {

std::vector<std::string> SplitCells(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  return cells;
}

TEST(FormatNumberTest, Rendering) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(1.0 / 3.0), "0.333333333333333");
  EXPECT_EQ(FormatNumber(std::nullopt), "NA");
  EXPECT_EQ(FormatNumber(std::numeric_limits<double>::infinity()), "NA");
  EXPECT_EQ(FormatNumber(std::numeric_limits<double>::quiet_NaN()), "NA");
}

TEST(EvaluatePointTest, InvariantsHold) {
  EvaluateOptions opts;
  opts.keep_rate_vectors = true;
  for (const int k : {2, 3, 10, 40}) {
    for (const double h : {0.1, 0.5, 2.0}) {
      for (const double q : {1.0, 6.0}) {
        const RdlPoint p = EvaluatePoint(ModelParams::Create(k, h, 1.0), q, opts);
        const double sum =
            std::accumulate(p.rates_dist.begin(), p.rates_dist.end(), 0.0);
        ASSERT_EQ(p.rates_dist.size(), static_cast<size_t>(k));
        EXPECT_NEAR(sum, *p.r_sum_dist, 1e-9 * sum);
        EXPECT_DOUBLE_EQ(*p.r_per_user_dist, *p.r_sum_dist / k);
        EXPECT_DOUBLE_EQ(*p.r_per_user_ceo, *p.r_sum_ceo / k);
        EXPECT_LE(p.d_min, p.d_achievable);
        EXPECT_LE(p.d_achievable, p.d_max + 1e-12);
        for (const double r : p.rates_dist) EXPECT_GE(r, 0.0);
      }
    }
  }
}

TEST(EvaluatePointTest, ZeroNoiseHasNoRates) {
  const RdlPoint p = EvaluatePoint(ModelParams::Create(3, 0.5, 1.0), 0.0);
  EXPECT_FALSE(p.r_sum_dist.has_value());
  EXPECT_FALSE(p.r1_outer.has_value());
  EXPECT_TRUE(p.leakage_outer.has_value());
  EXPECT_DOUBLE_EQ(p.d_achievable, p.d_min);
}

TEST(EvaluatePointTest, OptionsDropColumns) {
  EvaluateOptions opts;
  opts.include_outer = false;
  opts.include_exact_leakage = false;
  const RdlPoint p = EvaluatePoint(ModelParams::Create(3, 0.5, 1.0), 6.0, opts);
  EXPECT_FALSE(p.leakage_exact.has_value());
  EXPECT_FALSE(p.r1_outer.has_value());
  EXPECT_FALSE(p.leakage_outer.has_value());
}

TEST(EvaluatePointTest, LargeK) {
  const RdlPoint p = EvaluatePoint(ModelParams::Create(1000000, 0.5, 1.0), 6.0);
  EXPECT_TRUE(std::isfinite(*p.r_per_user_dist));
  EXPECT_TRUE(std::isfinite(*p.leakage_exact));
}

TEST(SweepSpecTest, Validation) {
  SweepSpec s;
  EXPECT_THROW(s.Validate(), InvalidArgumentError);
  s.k_values = {2, 3, 3};
  EXPECT_THROW(s.Validate(), InvalidArgumentError);
  s.k_values = {1, 3};
  EXPECT_THROW(s.Validate(), InvalidArgumentError);
  s.k_values = {2, 5, 9};
  EXPECT_NO_THROW(s.Validate());
  s.sigma_q2 = -1.0;
  EXPECT_THROW(s.Validate(), InvalidArgumentError);
}

TEST(CsvTest, HeaderAndRow) {
  std::ostringstream out;
  WriteCsvHeader(out);
  EXPECT_EQ(out.str(),
            "k,h,sigma_x2,sigma_q2,units,alpha,beta,d_min,d_max,d_achievable,"
            "r_sum_dist,r_per_user_dist,r_sum_ceo,r_per_user_ceo,"
            "r_per_user_limit,leakage_formula,leakage_exact,r1_outer,"
            "leakage_outer\n");
  const RdlPoint p = EvaluatePoint(ModelParams::Create(3, 0.5, 1.0), 6.0);
  std::ostringstream row;
  WriteCsvRow(row, p, Units::kBits);
  const std::string line = row.str();
  ASSERT_EQ(line.back(), '\n');
  const std::vector<std::string> cells =
      SplitCells(line.substr(0, line.size() - 1));
  ASSERT_EQ(cells.size(), kCsvColumns.size());
  EXPECT_EQ(cells[0], "3");
  EXPECT_EQ(cells[4], "bits");
  EXPECT_NEAR(std::stod(cells[9]), 0.665542, 1e-6);
  EXPECT_NEAR(std::stod(cells[10]), 0.556082, 1e-5);

  std::ostringstream nats;
  WriteCsvRow(nats, p, Units::kNats);
  const std::vector<std::string> nc = SplitCells(nats.str());
  EXPECT_EQ(nc[4], "nats");
  EXPECT_NEAR(std::stod(nc[10]), std::stod(cells[10]) * std::log(2.0), 1e-13);
  EXPECT_EQ(nc[9], cells[9]);  // distortions are not information units
}

TEST(CsvTest, NaCells) {
  const RdlPoint p = EvaluatePoint(ModelParams::Create(3, 0.5, 1.0), 0.0);
  std::ostringstream row;
  WriteCsvRow(row, p, Units::kBits);
  const std::vector<std::string> cells = SplitCells(row.str());
  EXPECT_EQ(cells[10], "NA");
  EXPECT_EQ(cells[17], "NA");
  for (const std::string& c : cells) EXPECT_FALSE(c.empty());
}

TEST(TextTest, KeyValueLines) {
  std::ostringstream out;
  WriteText(out, EvaluatePoint(ModelParams::Create(2, 1.0, 1.0), 1.0),
            Units::kBits);
  const std::string text = out.str();
  EXPECT_NE(text.find("k = 2\n"), std::string::npos);
  EXPECT_NE(text.find("r_sum_dist = 1.41503749927884"), std::string::npos);
}

}  // namespace
}  // namespace dsest
