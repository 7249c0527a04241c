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

#include "sbt/data/binning.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::data {
namespace {

Matrix Column(const std::vector<double>& v) {
  Matrix m(v.size(), 1);
  m.data = v;
  return m;
}

TEST(BinningTest, ExactMedianSplit) {
  BinnedMatrix b = QuantileBin(Column({1, 2, 3, 4}), 2);
  ASSERT_EQ(b.bins(0).edges.size(), 1u);
  EXPECT_EQ(b.BinAt(0, 0), 0);
  EXPECT_EQ(b.BinAt(1, 0), 0);
  EXPECT_EQ(b.BinAt(2, 0), 1);
  EXPECT_EQ(b.BinAt(3, 0), 1);
}

TEST(BinningTest, AllZeroFeatureStoresNothing) {
  BinnedMatrix b = QuantileBin(Column({0, 0, 0}), 32);
  EXPECT_EQ(b.num_stored(), 0u);
  EXPECT_EQ(b.bins(0).zero_bin, 0);
  EXPECT_EQ(b.constant_features().size(), 1u);
  EXPECT_EQ(b.BinAt(2, 0), 0);
}

TEST(BinningTest, ZerosAreOmittedButRecoverable) {
  BinnedMatrix b = QuantileBin(Column({-2, 0, 0, 1, 3, 0, 5, -1}), 4);
  EXPECT_EQ(b.num_stored(), 5u);
  const FeatureBins& fb = b.bins(0);
  EXPECT_EQ(fb.zero_bin, fb.BinOf(0.0));
  EXPECT_EQ(b.BinAt(1, 0), fb.zero_bin);
  for (size_t i = 0; i < b.num_rows(); ++i) {
    EXPECT_LT(b.BinAt(i, 0), fb.num_bins());
  }
}

TEST(BinningTest, RandomFeaturePopulationsAreBalanced) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 1000 + trial * 37;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(gen);
    BinnedMatrix b = QuantileBin(Column(v), 32);
    ASSERT_EQ(b.bins(0).num_bins(), 32);
    std::vector<int> pop(32);
    for (size_t i = 0; i < n; ++i) ++pop[b.BinAt(i, 0)];
    // Sort-based oracle for the expected population of each bin.
    for (int k = 0; k < 32; ++k) {
      double ideal = static_cast<double>(n) / 32;
      EXPECT_LE(std::abs(pop[k] - ideal), 1.0) << "bin " << k;
    }
  }
}

TEST(BinningTest, MappingIsMonotoneAndClamped) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> ud(-10, 10);
  std::vector<double> v(300);
  for (auto& x : v) x = ud(gen);
  auto bins = ComputeQuantileBins(Column(v), 16);
  std::vector<double> probe(v);
  std::sort(probe.begin(), probe.end());
  int prev = -1;
  for (double x : probe) {
    int bin = bins[0].BinOf(x);
    EXPECT_GE(bin, prev);
    prev = bin;
  }
  EXPECT_EQ(bins[0].BinOf(-1e9), 0);
  EXPECT_EQ(bins[0].BinOf(1e9), bins[0].num_bins() - 1);
}

TEST(BinningTest, TiesMergeIntoFewerBins) {
  BinnedMatrix b = QuantileBin(Column({1, 1, 1, 1, 1, 1, 2, 2}), 8);
  EXPECT_EQ(b.bins(0).num_bins(), 2);
}

TEST(BinningTest, DeterministicAndValidated) {
  std::vector<double> v{3, 1, 4, 1, 5, 9, 2, 6};
  auto a = ComputeQuantileBins(Column(v), 4);
  auto b = ComputeQuantileBins(Column(v), 4);
  EXPECT_EQ(a[0].edges, b[0].edges);
  EXPECT_THROW(ComputeQuantileBins(Column(v), 1), ConfigError);
  EXPECT_THROW(ComputeQuantileBins(Column(v), 256), ConfigError);
  Matrix two(2, 2);
  EXPECT_THROW(ApplyBins(two, a), DataError);
}

}  // namespace
}  // namespace sbt::data
