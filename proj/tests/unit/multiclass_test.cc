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

#include "sbt/encoding/multiclass.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::encoding {
namespace {

TEST(MulticlassLayoutTest, FormulaValues) {
  MulticlassLayout a = MakeMulticlassLayout(11, 1023, 147);
  EXPECT_EQ(a.classes_per_cipher, 6);
  EXPECT_EQ(a.ciphers_per_instance, 2);
  EXPECT_EQ(a.ClassesIn(0), 6);
  EXPECT_EQ(a.ClassesIn(1), 5);
  MulticlassLayout b = MakeMulticlassLayout(1, 1023, 147);
  EXPECT_EQ(b.ciphers_per_instance, 1);
  MulticlassLayout c = MakeMulticlassLayout(6, 1023, 147);
  EXPECT_EQ(c.ciphers_per_instance, 1);
  EXPECT_THROW(MakeMulticlassLayout(0, 1023, 147), ConfigError);
  EXPECT_THROW(MakeMulticlassLayout(3, 100, 147), ConfigError);
}

TEST(MulticlassLayoutTest, RandomFormulaOracle) {
  std::mt19937 gen(5);
  for (int i = 0; i < 500; ++i) {
    int iota = 100 + static_cast<int>(gen() % 2000);
    int bgh = 2 + static_cast<int>(gen() % iota);
    if (bgh > iota) continue;
    int k = 1 + static_cast<int>(gen() % 40);
    MulticlassLayout l = MakeMulticlassLayout(k, iota, bgh);
    int eta = iota / bgh;
    ASSERT_EQ(l.classes_per_cipher, eta);
    ASSERT_EQ(l.ciphers_per_instance, (k + eta - 1) / eta);
  }
}

TEST(MulticlassPackTest, SingleClassMatchesScalarPacking) {
  std::vector<double> g{0.3, -0.2}, h{0.1, 0.2};
  PackState s = ComputePackState(g, h, 53, 1023);
  MulticlassLayout l = MakeMulticlassLayout(1, 1023, s.gh_bits());
  for (size_t i = 0; i < g.size(); ++i) {
    auto row = PackGhMulticlassRow(std::span(&g[i], 1), std::span(&h[i], 1), s, l);
    ASSERT_EQ(row.size(), 1u);
    EXPECT_EQ(row[0], PackGh(g[i], h[i], s));
  }
}

TEST(MulticlassPackTest, ClassZeroIsMostSignificant) {
  Matrix g(1, 3), h(1, 3);
  g.at(0, 0) = 0.5;
  h.at(0, 0) = 0.25;
  PackState s = AssignBits(1, 1.0, 0.0, 0.25, 20, 1023);
  MulticlassLayout l = MakeMulticlassLayout(3, 1023, s.gh_bits());
  auto row = PackGhMulticlassRow(g.row(0), h.row(0), s, l);
  ASSERT_EQ(row.size(), 1u);
  EXPECT_EQ(row[0] >> (2 * s.gh_bits()), PackGh(0.5, 0.25, s));
}

TEST(MulticlassPackTest, EncryptedSumRecoversPerClassTotals) {
  he::KeyPair keys = he::GenerateKeyPair(512, 21);
  he::RandomSource rng = he::RandomSource::FromSeed(22);
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> gd(-1.0, 1.0), hd(0.0, 0.25);
  const int n = 5, k = 7;
  Matrix g(n, k), h(n, k);
  for (auto& v : g.data) v = gd(gen);
  for (auto& v : h.data) v = hd(gen);
  const int iota = keys.public_key.MaxPlaintextBits();
  PackState s = ComputeMulticlassPackState(g, h, 53, iota);
  EncryptedGhMatrix enc = PackAndEncryptMulticlass(keys.public_key, g, h, s, rng);
  ASSERT_GE(enc.layout.ciphers_per_instance, 2);
  std::vector<he::Ciphertext> acc = enc.rows[0];
  for (int i = 1; i < n; ++i) {
    for (size_t c = 0; c < acc.size(); ++c) {
      acc[c] = he::Add(keys.public_key, acc[c], enc.rows[i][c]);
    }
  }
  std::vector<BigInt> plain;
  for (const auto& c : acc) plain.push_back(he::Decrypt(keys, c));
  ClassSums sums = RecoverMulticlassSums(plain, enc.layout, s, n);
  for (int c = 0; c < k; ++c) {
    double gs = 0, hs = 0;
    for (int i = 0; i < n; ++i) {
      gs += g.at(i, c);
      hs += h.at(i, c);
    }
    EXPECT_NEAR(sums.g[c], gs, (n + 1) * std::ldexp(1.0, -52));
    EXPECT_NEAR(sums.h[c], hs, (n + 1) * std::ldexp(1.0, -52));
  }
}

TEST(MulticlassPackTest, ZeroMatricesRecoverZeros) {
  Matrix g(4, 3), h(4, 3);
  PackState s = ComputeMulticlassPackState(g, h, 53, 1023);
  MulticlassLayout l = MakeMulticlassLayout(3, 1023, s.gh_bits());
  std::vector<BigInt> total(l.ciphers_per_instance);
  for (int i = 0; i < 4; ++i) {
    auto row = PackGhMulticlassRow(g.row(i), h.row(i), s, l);
    for (size_t c = 0; c < row.size(); ++c) total[c] += row[c];
  }
  ClassSums sums = RecoverMulticlassSums(total, l, s, 4);
  for (int c = 0; c < 3; ++c) {
    EXPECT_EQ(sums.g[c], 0.0);
    EXPECT_EQ(sums.h[c], 0.0);
  }
}

TEST(MulticlassPackTest, TooFewIntegersIsCorruption) {
  PackState s = AssignBits(10, 1.0, 1.0, 0.25, 53, 1023);
  MulticlassLayout l = MakeMulticlassLayout(11, 1023, s.gh_bits());
  ASSERT_EQ(l.ciphers_per_instance, 2);
  std::vector<BigInt> one{0};
  EXPECT_THROW(RecoverMulticlassSums(one, l, s, 1), CorruptionError);
}

}  // namespace
}  // namespace sbt::encoding
