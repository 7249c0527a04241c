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

#ifndef SBT_ENCODING_GH_PACKING_H_
#define SBT_ENCODING_GH_PACKING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sbt/common/bytes.h"
#include "sbt/he/paillier.h"

namespace sbt::encoding {

using he::BigInt;

inline constexpr int kDefaultPrecision = 53;
inline constexpr int kMinPrecision = 10;
inline constexpr int kMaxPrecision = 60;

// floor(x * 2^precision). x must be finite and >= 0.
BigInt FixedPointEncode(double x, int precision);
// v / 2^precision, evaluated exactly and converted once to double.
double FixedPointDecode(const BigInt& v, int precision);

// Bit layout shared by the guest and every host for one boosting tree.
//
// A packed value is (g_int << h_bits) + h_int, where g_int is the fixed-point
// encoding of g + g_offset and h_int that of h. Field widths are sized so the
// sum over all n_instances can never carry from one field into the next.
struct PackState {
  int precision = kDefaultPrecision;
  double g_offset = 0.0;  // |min(g)|, 0 when every g >= 0
  double g_max = 0.0;     // max(g) before offsetting
  double h_max = 0.0;
  int g_bits = 1;
  int h_bits = 1;
  int64_t n_instances = 0;

  int gh_bits() const { return g_bits + h_bits; }
};

struct GhSum {
  double g = 0.0;
  double h = 0.0;
};

// Assigns b_g = BitLength(floor(n (g_max + g_off) 2^r)) and
// b_h = BitLength(floor(n h_max 2^r)), each clamped to >= 1. Throws
// ConfigError when b_g + b_h exceeds plaintext_bits.
PackState AssignBits(int64_t n_instances, double g_max, double g_offset,
                     double h_max, int precision, int plaintext_bits);

// Derives the pack state from the gradient vectors.
PackState ComputePackState(std::span<const double> g, std::span<const double> h,
                           int precision, int plaintext_bits);

// Smallest even key size whose plaintext space holds gh_bits.
int MinimalKeyBitsFor(int gh_bits);

BigInt PackGh(double g, double h, const PackState& state);
std::vector<BigInt> PackGh(std::span<const double> g, std::span<const double> h,
                           const PackState& state);

// Splits a (possibly summed) packed value and removes the accumulated offset
// g_offset * sample_count. Throws CorruptionError when value does not fit in
// gh_bits.
GhSum UnpackGh(const BigInt& value, const PackState& state,
               int64_t sample_count);

// Decodes a single fixed-point field holding a sum of offset gradients.
double DecodeGradientField(const BigInt& field, const PackState& state,
                           int64_t sample_count);

// Throws CorruptionError when value does not fit in `bits`.
void CheckFits(const BigInt& value, int bits, const char* what);

void WritePackState(ByteWriter& w, const PackState& s);
PackState ReadPackState(ByteReader& r);

}  // namespace sbt::encoding

#endif  // SBT_ENCODING_GH_PACKING_H_
