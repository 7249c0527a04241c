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

#include "sbt/encoding/compress.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::encoding {
namespace {

class CompressTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { keys_ = new he::KeyPair(he::GenerateKeyPair(1024, 3)); }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }
  const he::PublicKey& pk() { return keys_->public_key; }

  static he::KeyPair* keys_;
};

he::KeyPair* CompressTest::keys_ = nullptr;

TEST(CompressCapacityTest, KnownValues) {
  EXPECT_EQ(CompressCapacity(1023, 147), 6);
  EXPECT_EQ(CompressCapacity(1023, 1023), 1);
  EXPECT_EQ(CompressCapacity(2047, 147), 13);
  EXPECT_THROW(CompressCapacity(100, 147), ConfigError);
}

TEST_F(CompressTest, PackageSizesFollowCeiling) {
  he::RandomSource rng = he::RandomSource::FromSeed(1);
  std::vector<SplitInfo> infos;
  for (int i = 0; i < 13; ++i) {
    infos.push_back({he::Encrypt(pk(), i, rng), static_cast<uint64_t>(i), 1});
  }
  auto packages = CompressSplitInfos(pk(), infos, 6, 147);
  ASSERT_EQ(packages.size(), 3u);
  EXPECT_EQ(packages[0].size(), 6u);
  EXPECT_EQ(packages[1].size(), 6u);
  EXPECT_EQ(packages[2].size(), 1u);
  EXPECT_EQ(packages[1].split_ids.front(), 6u);
}

TEST_F(CompressTest, SingleInfoDecryptsToOriginal) {
  he::RandomSource rng = he::RandomSource::FromSeed(2);
  PackState s = AssignBits(100, 1.0, 1.0, 0.25, 53, 1023);
  BigInt packed = PackGh(0.5, 0.125, s);
  std::vector<SplitInfo> infos{{he::Encrypt(pk(), packed, rng), 9, 1}};
  auto packages = CompressSplitInfos(pk(), infos, 6, s.gh_bits());
  ASSERT_EQ(packages.size(), 1u);
  BigInt plain = he::Decrypt(*keys_, packages[0].cipher);
  EXPECT_EQ(plain, packed);
  auto entries = DecompressPackage(plain, packages[0], s, 6);
  ASSERT_EQ(entries.size(), 1u);
  GhSum direct = UnpackGh(packed, s, 1);
  EXPECT_EQ(entries[0].sum.g, direct.g);
  EXPECT_EQ(entries[0].sum.h, direct.h);
  EXPECT_EQ(entries[0].split_id, 9u);
}

TEST_F(CompressTest, RandomAggregatesRoundTripExactly) {
  he::RandomSource rng = he::RandomSource::FromSeed(3);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> gd(-1.0, 1.0), hd(0.0, 0.25);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 500;
    std::vector<double> g(n), h(n);
    for (int i = 0; i < n; ++i) {
      g[i] = gd(gen);
      h[i] = hd(gen);
    }
    PackState s = ComputePackState(g, h, 53, pk().MaxPlaintextBits());
    int cap = CompressCapacity(pk().MaxPlaintextBits(), s.gh_bits());
    std::vector<BigInt> packed = PackGh(g, h, s);
    int count = 1 + static_cast<int>(gen() % (2 * cap + 1));
    std::vector<SplitInfo> infos;
    std::vector<BigInt> expect;
    for (int k = 0; k < count; ++k) {
      BigInt agg = 0;
      int64_t c = 0;
      for (int i = 0; i < n; ++i) {
        if (gen() % 3 == 0) {
          agg += packed[i];
          ++c;
        }
      }
      expect.push_back(agg);
      infos.push_back({he::Encrypt(pk(), agg, rng), gen(), c});
    }
    auto packages = CompressSplitInfos(pk(), infos, cap, s.gh_bits());
    ASSERT_EQ(packages.size(), (count + cap - 1) / static_cast<size_t>(cap));
    size_t k = 0;
    for (const auto& p : packages) {
      // Plaintext fold oracle.
      BigInt folded = 0;
      for (size_t j = 0; j < p.size(); ++j) {
        folded = (folded << s.gh_bits()) + expect[k + j];
      }
      BigInt plain = he::Decrypt(*keys_, p.cipher);
      ASSERT_EQ(plain, folded);
      auto entries = DecompressPackage(plain, p, s, cap);
      for (const auto& e : entries) {
        ASSERT_EQ(e.packed, expect[k]);
        ASSERT_EQ(e.split_id, infos[k].split_id);
        ASSERT_EQ(e.sample_count, infos[k].sample_count);
        ++k;
      }
    }
    ASSERT_EQ(k, infos.size());
  }
}

TEST(DecompressTest, ZeroAggregatesDecodeToZero) {
  PackState s = AssignBits(10, 0.0, 0.0, 0.25, 30, 1023);
  SplitInfoPackage meta{{}, {1, 2, 3}, {0, 0, 0}};
  auto entries = DecompressPackage(0, meta, s, 6);
  for (const auto& e : entries) {
    EXPECT_EQ(e.sum.g, 0.0);
    EXPECT_EQ(e.sum.h, 0.0);
  }
}

TEST(DecompressTest, MetadataMismatchIsCorruption) {
  PackState s = AssignBits(10, 1.0, 1.0, 0.25, 30, 1023);
  BigInt two_entries = (PackGh(0.1, 0.1, s) << s.gh_bits()) + PackGh(0.2, 0.2, s);
  SplitInfoPackage one{{}, {1}, {1}};
  EXPECT_THROW(DecompressPackage(two_entries, one, s, 6), CorruptionError);
  SplitInfoPackage seven{{}, {1, 2, 3, 4, 5, 6, 7}, {1, 1, 1, 1, 1, 1, 1}};
  EXPECT_THROW(DecompressPackage(two_entries, seven, s, 6), CorruptionError);
  SplitInfoPackage uneven{{}, {1, 2}, {1}};
  EXPECT_THROW(DecompressPackage(two_entries, uneven, s, 6), CorruptionError);
}

}  // namespace
}  // namespace sbt::encoding
