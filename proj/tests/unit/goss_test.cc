/*
 * Copyright 2026 The sbtplus Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sbt/tree/goss.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::tree {
namespace {

TEST(GossTest, TenInstances) {
  std::vector<double> g{0.1, -0.9, 0.2, 0.05, 0.8, -0.3, 0.01, 0.02, 0.03, 0.04};
  GossSelection s = GossSample(g, 0.2, 0.1, 1);
  ASSERT_EQ(s.indices.size(), 3u);
  int top = 0, sampled = 0;
  for (size_t i = 0; i < s.indices.size(); ++i) {
    if (s.indices[i] == 1 || s.indices[i] == 4) {
      EXPECT_EQ(s.multipliers[i], 1.0);
      ++top;
    } else {
      EXPECT_DOUBLE_EQ(s.multipliers[i], 8.0);
      ++sampled;
    }
  }
  EXPECT_EQ(top, 2);
  EXPECT_EQ(sampled, 1);
  EXPECT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
}

TEST(GossTest, FullCoverageHasUnitMultipliers) {
  std::vector<double> g(50);
  for (size_t i = 0; i < g.size(); ++i) g[i] = std::sin(static_cast<double>(i));
  GossSelection s = GossSample(g, 0.9, 0.1, 3);
  ASSERT_EQ(s.indices.size(), 50u);
  for (double m : s.multipliers) EXPECT_DOUBLE_EQ(m, 1.0);
}

TEST(GossTest, SeedDeterminism) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  std::vector<double> g(500);
  for (auto& v : g) v = nd(gen);
  GossSelection a = GossSample(g, 0.2, 0.1, 77);
  GossSelection b = GossSample(g, 0.2, 0.1, 77);
  GossSelection c = GossSample(g, 0.2, 0.1, 78);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_NE(a.indices, c.indices);
}

TEST(GossTest, ExactCountsAtScale) {
  std::vector<double> g(2000, 0.5);
  GossSelection s = GossSample(g, 0.2, 0.1, 5);
  EXPECT_EQ(s.indices.size(), 600u);
  std::set<uint32_t> uniq(s.indices.begin(), s.indices.end());
  EXPECT_EQ(uniq.size(), 600u);
}

TEST(GossTest, AmplifiedSumIsUnbiasedOver200Trials) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> nd;
  const size_t n = 1000;
  std::vector<double> g(n);
  for (auto& v : g) v = nd(gen);
  double full = 0;
  for (double v : g) full += v;
  double mean = 0, sq = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    GossSelection s = GossSample(g, 0.2, 0.1, 1000 + t);
    double est = 0;
    for (size_t i = 0; i < s.indices.size(); ++i) {
      est += s.multipliers[i] * g[s.indices[i]];
    }
    mean += est;
    sq += est * est;
  }
  mean /= trials;
  double var = sq / trials - mean * mean;
  double se = std::sqrt(var / trials);
  EXPECT_NEAR(mean, full, 4 * se + 1e-9);
}

TEST(GossTest, RejectsBadRates) {
  std::vector<double> g(10, 1.0);
  EXPECT_THROW(GossSample(g, 0.0, 0.1, 1), ConfigError);
  EXPECT_THROW(GossSample(g, 0.2, 0.0, 1), ConfigError);
  EXPECT_THROW(GossSample(g, 0.7, 0.5, 1), ConfigError);
  EXPECT_THROW(GossSample(g, 1.2, 0.1, 1), ConfigError);
}

}  // namespace
}  // namespace sbt::tree
