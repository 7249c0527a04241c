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

#include "sbt/common/bytes.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sbt/common/error.h"

namespace sbt {
namespace {

TEST(BytesTest, RoundTripsEveryFieldType) {
  ByteWriter w;
  w.PutU8(0xAB);
  w.PutU16(0xBEEF);
  w.PutU32(0xDEADBEEF);
  w.PutU64(0x0123456789ABCDEFULL);
  w.PutF64(-1.5e-300);
  w.PutString("hello");
  w.PutBigUint(mpz_class("123456789012345678901234567890"));
  w.PutBigUint(0);
  Bytes raw{1, 2, 3};
  w.PutBytes(raw);

  ByteReader r(w.data());
  EXPECT_EQ(r.GetU8(), 0xAB);
  EXPECT_EQ(r.GetU16(), 0xBEEF);
  EXPECT_EQ(r.GetU32(), 0xDEADBEEFu);
  EXPECT_EQ(r.GetU64(), 0x0123456789ABCDEFULL);
  EXPECT_EQ(r.GetF64(), -1.5e-300);
  EXPECT_EQ(r.GetString(), "hello");
  EXPECT_EQ(r.GetBigUint(), mpz_class("123456789012345678901234567890"));
  EXPECT_EQ(r.GetBigUint(), 0);
  EXPECT_EQ(r.GetBytes(), raw);
  EXPECT_TRUE(r.done());
  EXPECT_NO_THROW(r.ExpectDone());
}

TEST(BytesTest, IntegersAreBigEndian) {
  ByteWriter w;
  w.PutU32(0x01020304);
  EXPECT_EQ(w.data(), (Bytes{1, 2, 3, 4}));
}

TEST(BytesTest, NonFiniteDoublesSurvive) {
  ByteWriter w;
  w.PutF64(std::numeric_limits<double>::infinity());
  w.PutF64(std::nan(""));
  ByteReader r(w.data());
  EXPECT_TRUE(std::isinf(r.GetF64()));
  EXPECT_TRUE(std::isnan(r.GetF64()));
}

TEST(BytesTest, TruncatedInputThrowsProtocolError) {
  ByteWriter w;
  w.PutU32(10);  // claims 10 bytes follow
  w.PutU8(1);
  ByteReader r(w.data());
  EXPECT_THROW(r.GetBytes(), ProtocolError);
  ByteReader empty(Bytes{});
  EXPECT_THROW(empty.GetU8(), ProtocolError);
}

TEST(BytesTest, TrailingBytesAreRejected) {
  Bytes b{0, 1};
  ByteReader r(b);
  r.GetU8();
  EXPECT_THROW(r.ExpectDone(), ProtocolError);
}

TEST(BytesTest, BigUintBytesRoundTrip) {
  for (int bits : {1, 7, 8, 9, 64, 1023, 2048}) {
    mpz_class v = 1;
    v <<= bits;
    v -= 1;
    EXPECT_EQ(BigUintFromBytes(BigUintToBytes(v)), v) << bits;
  }
  EXPECT_TRUE(BigUintToBytes(0).empty());
}

}  // namespace
}  // namespace sbt
