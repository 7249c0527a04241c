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

#include "sbt/encoding/gh_packing.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::encoding {
namespace {

// Independent oracle: exact floor(x * 2^r) through mpf at high precision.
BigInt OracleEncode(double x, int r) {
  mpf_class v(x, 256);
  mpf_class scale(1, 256);
  mpf_mul_2exp(scale.get_mpf_t(), scale.get_mpf_t(), r);
  v *= scale;
  mpf_class fl(0, 256);
  mpf_floor(fl.get_mpf_t(), v.get_mpf_t());
  return BigInt(fl);
}

int OracleBitLength(const BigInt& v) {
  if (v == 0) return 0;
  int bits = 0;
  BigInt t = v;
  while (t > 0) {
    t >>= 1;
    ++bits;
  }
  return bits;
}

TEST(FixedPointTest, KnownValues) {
  EXPECT_EQ(FixedPointEncode(0.5, 53), BigInt(1) << 52);
  EXPECT_EQ(FixedPointEncode(0.0, 53), 0);
  EXPECT_EQ(FixedPointEncode(0.0, 10), 0);
  EXPECT_EQ(FixedPointEncode(0.3, 53), OracleEncode(0.3, 53));
}

TEST(FixedPointTest, RandomValuesMatchOracleAndDecode) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> dist(0.0, 1000.0);
  for (int i = 0; i < 2000; ++i) {
    double x = dist(gen);
    int r = 10 + static_cast<int>(gen() % 51);
    BigInt e = FixedPointEncode(x, r);
    ASSERT_EQ(e, OracleEncode(x, r));
    ASSERT_NEAR(FixedPointDecode(e, r), x, std::ldexp(1.0, -r) + 1e-12 * x);
  }
}

TEST(FixedPointTest, InvalidInputsRejected) {
  EXPECT_THROW(FixedPointEncode(-0.1, 53), Error);
  EXPECT_THROW(AssignBits(10, 1.0, 1.0, 1.0, kMinPrecision - 1, 1023),
               ConfigError);
  EXPECT_THROW(AssignBits(10, 1.0, 1.0, 1.0, kMaxPrecision + 1, 1023),
               ConfigError);
}

TEST(AssignBitsTest, MillionInstancesAtDefaultPrecision) {
  PackState s = AssignBits(1000000, 1.0, 1.0, 1.0, 53, 1023);
  EXPECT_EQ(s.g_bits, 74);
  EXPECT_EQ(s.h_bits, 73);
  EXPECT_EQ(s.gh_bits(), 147);
}

TEST(AssignBitsTest, DegenerateZeroInputsClampToOneBit) {
  std::vector<double> g{0.0}, h{0.0};
  PackState s = ComputePackState(g, h, 53, 1023);
  EXPECT_EQ(s.g_offset, 0.0);
  EXPECT_EQ(s.g_bits, 1);
  EXPECT_EQ(s.h_bits, 1);
}

TEST(AssignBitsTest, SmallPrecisionMatchesBitLengthOracle) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> gd(-1.0, 1.0), hd(0.0, 1.0);
  std::vector<double> g(1000), h(1000);
  for (int i = 0; i < 1000; ++i) {
    g[i] = gd(gen);
    h[i] = hd(gen);
  }
  PackState s = ComputePackState(g, h, 10, 1023);
  double gmin = *std::min_element(g.begin(), g.end());
  double off = gmin < 0 ? -gmin : 0.0;
  double gmax_shifted = 0;
  for (double v : g) gmax_shifted = std::max(gmax_shifted, v + off);
  double hmax = *std::max_element(h.begin(), h.end());
  EXPECT_DOUBLE_EQ(s.g_offset, off);
  EXPECT_EQ(s.g_bits,
            std::max(1, OracleBitLength(OracleEncode(1000 * gmax_shifted, 10))));
  EXPECT_EQ(s.h_bits,
            std::max(1, OracleBitLength(OracleEncode(1000 * hmax, 10))));
}

TEST(AssignBitsTest, TooManyInstancesForKey) {
  try {
    AssignBits(1000000, 1.0, 1.0, 1.0, 53, 100);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("key"), std::string::npos);
  }
  EXPECT_GE(MinimalKeyBitsFor(147), 148);
  EXPECT_EQ(MinimalKeyBitsFor(147) % 2, 0);
}

TEST(PackGhTest, CoarseRoundTrip) {
  std::vector<double> g{0.25, -1.0}, h{0.5, 0.0};
  PackState s = ComputePackState(g, h, kMinPrecision, 1023);
  EXPECT_DOUBLE_EQ(s.g_offset, 1.0);
  GhSum back = UnpackGh(PackGh(0.25, 0.5, s), s, 1);
  const double tol = std::ldexp(1.0, -(kMinPrecision - 1));
  EXPECT_NEAR(back.g, 0.25, tol);
  EXPECT_NEAR(back.h, 0.5, tol);
}

TEST(PackGhTest, LayoutIsShiftedGPlusH) {
  std::vector<double> g{0.25, -1.0}, h{0.5, 0.25};
  PackState s = ComputePackState(g, h, 20, 1023);
  BigInt packed = PackGh(0.25, 0.5, s);
  BigInt expect = (OracleEncode(0.25 + s.g_offset, 20) << s.h_bits) +
                  OracleEncode(0.5, 20);
  EXPECT_EQ(packed, expect);
}

TEST(PackGhTest, SumOfThreeRecoversTotals) {
  std::vector<double> g{0.3, -0.7, 0.1}, h{0.2, 0.1, 0.25};
  PackState s = ComputePackState(g, h, 30, 1023);
  std::vector<BigInt> packed = PackGh(g, h, s);
  BigInt sum = packed[0] + packed[1] + packed[2];
  GhSum back = UnpackGh(sum, s, 3);
  EXPECT_NEAR(back.g, 0.3 - 0.7 + 0.1, 3 * std::ldexp(1.0, -30) * 2);
  EXPECT_NEAR(back.h, 0.55, 3 * std::ldexp(1.0, -30) * 2);
}

TEST(PackGhTest, ZeroUnpack) {
  PackState s = AssignBits(10, 1.0, 0.0, 1.0, 53, 1023);
  GhSum back = UnpackGh(0, s, 0);
  EXPECT_EQ(back.g, 0.0);
  EXPECT_EQ(back.h, 0.0);
}

TEST(PackGhTest, OversizedValueIsCorruption) {
  PackState s = AssignBits(10, 1.0, 1.0, 1.0, 20, 1023);
  BigInt too_big = BigInt(1) << s.gh_bits();
  EXPECT_THROW(UnpackGh(too_big, s, 1), CorruptionError);
}

TEST(PackGhTest, RandomSubsetSumsWithinTolerance) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> gd(-1.0, 1.0), hd(0.0, 0.25);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(gen() % 200);
    std::vector<double> g(n), h(n);
    for (int i = 0; i < n; ++i) {
      g[i] = gd(gen);
      h[i] = hd(gen);
    }
    int r = 20 + static_cast<int>(gen() % 34);
    PackState s = ComputePackState(g, h, r, 1023);
    std::vector<BigInt> packed = PackGh(g, h, s);
    BigInt sum = 0;
    double gs = 0, hs = 0;
    int64_t count = 0;
    for (int i = 0; i < n; ++i) {
      if (gen() % 2) continue;
      sum += packed[i];
      gs += g[i];
      hs += h[i];
      ++count;
    }
    GhSum back = UnpackGh(sum, s, count);
    double tol = (count + 1) * std::ldexp(1.0, -r + 1) + 1e-12;
    ASSERT_NEAR(back.g, gs, tol) << "trial " << trial;
    ASSERT_NEAR(back.h, hs, tol) << "trial " << trial;
  }
}

TEST(PackGhTest, NoFieldBleedAtAdversarialMaxima) {
  for (int n = 1; n <= 64; ++n) {
    for (int r = kMinPrecision; r <= kMinPrecision + 4; ++r) {
      std::vector<double> g(n, 1.0), h(n, 1.0);
      g[0] = -1.0;
      PackState s = ComputePackState(g, h, r, 1023);
      BigInt sum = 0;
      for (int i = 0; i < n; ++i) sum += PackGh(s.g_max, s.h_max, s);
      BigInt h_field = sum & ((BigInt(1) << s.h_bits) - 1);
      BigInt g_field = sum >> s.h_bits;
      ASSERT_EQ(h_field, OracleEncode(1.0, r) * n) << n << " " << r;
      ASSERT_EQ(g_field, OracleEncode(s.g_max + s.g_offset, r) * n);
      ASSERT_LT(OracleBitLength(g_field), s.g_bits + 1);
    }
  }
}

TEST(PackStateTest, SerializationRoundTrip) {
  PackState s = AssignBits(1234, 0.7, 0.9, 0.25, 40, 511);
  ByteWriter w;
  WritePackState(w, s);
  ByteReader r(w.data());
  PackState t = ReadPackState(r);
  EXPECT_EQ(t.precision, s.precision);
  EXPECT_EQ(t.g_offset, s.g_offset);
  EXPECT_EQ(t.g_max, s.g_max);
  EXPECT_EQ(t.h_max, s.h_max);
  EXPECT_EQ(t.g_bits, s.g_bits);
  EXPECT_EQ(t.h_bits, s.h_bits);
  EXPECT_EQ(t.n_instances, s.n_instances);
}

}  // namespace
}  // namespace sbt::encoding
