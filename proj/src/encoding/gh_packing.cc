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

#include <algorithm>
#include <cmath>
#include <string>

#include "sbt/common/error.h"

namespace sbt::encoding {
namespace {

void CheckPrecision(int precision) {
  if (precision < kMinPrecision || precision > kMaxPrecision) {
    throw ConfigError("precision must be in [" + std::to_string(kMinPrecision) +
                      ", " + std::to_string(kMaxPrecision) + "], got " +
                      std::to_string(precision));
  }
}

// Exact conversion of a finite non-negative double to mpf with enough bits.
mpf_class ExactFloat(double x) {
  mpf_class f(0, 128);
  f = x;
  return f;
}

// Bit length of floor(count * x * 2^precision), computed exactly.
int ScaledBitLength(int64_t count, double x, int precision) {
  mpf_class v(0, 256);
  v = ExactFloat(x);
  v *= static_cast<double>(count);
  mpf_mul_2exp(v.get_mpf_t(), v.get_mpf_t(), precision);
  BigInt floor_v(v);
  return he::BitLength(floor_v);
}

}  // namespace

BigInt FixedPointEncode(double x, int precision) {
  if (!std::isfinite(x) || x < 0) {
    throw CorruptionError("fixed-point encoding requires a finite value >= 0");
  }
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, mant in [0.5, 1)
  // mant * 2^53 is an exact integer.
  BigInt m(std::ldexp(mant, 53));
  int shift = exp - 53 + precision;
  if (shift >= 0) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), shift);
  } else {
    mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), -shift);
  }
  return m;
}

double FixedPointDecode(const BigInt& v, int precision) {
  mpf_class f(0, std::max<int>(64, he::BitLength(v) + 64));
  f = v;
  mpf_div_2exp(f.get_mpf_t(), f.get_mpf_t(), precision);
  return f.get_d();
}

PackState AssignBits(int64_t n_instances, double g_max, double g_offset,
                     double h_max, int precision, int plaintext_bits) {
  CheckPrecision(precision);
  if (n_instances <= 0) throw ConfigError("no instances to pack");
  if (!(g_offset >= 0) || !(g_max + g_offset >= 0) || !(h_max >= 0)) {
    throw ConfigError("offset gradients and hessians must be non-negative");
  }
  PackState s;
  s.precision = precision;
  s.g_offset = g_offset;
  s.g_max = g_max;
  s.h_max = h_max;
  s.n_instances = n_instances;
  s.g_bits = std::max(1, ScaledBitLength(n_instances, g_max + g_offset,
                                         precision));
  s.h_bits = std::max(1, ScaledBitLength(n_instances, h_max, precision));
  if (s.gh_bits() > plaintext_bits) {
    throw ConfigError(
        "instances too many for key length: packed gradient needs " +
        std::to_string(s.gh_bits()) + " bits but the plaintext space has " +
        std::to_string(plaintext_bits) + "; use key_bits >= " +
        std::to_string(MinimalKeyBitsFor(s.gh_bits())));
  }
  return s;
}

PackState ComputePackState(std::span<const double> g, std::span<const double> h,
                           int precision, int plaintext_bits) {
  if (g.empty() || g.size() != h.size()) {
    throw ConfigError("gradient and hessian vectors must be non-empty and "
                      "of equal length");
  }
  auto [gmin, gmax] = std::minmax_element(g.begin(), g.end());
  double hmax = *std::max_element(h.begin(), h.end());
  if (*std::min_element(h.begin(), h.end()) < 0) {
    throw ConfigError("hessians must be non-negative");
  }
  double offset = *gmin < 0 ? -*gmin : 0.0;
  return AssignBits(static_cast<int64_t>(g.size()), *gmax, offset, hmax,
                    precision, plaintext_bits);
}

int MinimalKeyBitsFor(int gh_bits) {
  int bits = gh_bits + 1;
  bits += bits % 2;
  return std::max(bits, he::kMinKeyBits);
}

BigInt PackGh(double g, double h, const PackState& state) {
  BigInt g_int = FixedPointEncode(g + state.g_offset, state.precision);
  BigInt h_int = FixedPointEncode(h, state.precision);
  CheckFits(g_int, state.g_bits, "gradient field");
  CheckFits(h_int, state.h_bits, "hessian field");
  mpz_mul_2exp(g_int.get_mpz_t(), g_int.get_mpz_t(), state.h_bits);
  return g_int + h_int;
}

std::vector<BigInt> PackGh(std::span<const double> g, std::span<const double> h,
                           const PackState& state) {
  if (g.size() != h.size()) throw ConfigError("g/h length mismatch");
  std::vector<BigInt> out;
  out.reserve(g.size());
  for (size_t i = 0; i < g.size(); ++i) out.push_back(PackGh(g[i], h[i], state));
  return out;
}

void CheckFits(const BigInt& value, int bits, const char* what) {
  if (sgn(value) < 0 || he::BitLength(value) > bits) {
    throw CorruptionError(std::string(what) + " exceeds its " +
                          std::to_string(bits) + "-bit field");
  }
}

double DecodeGradientField(const BigInt& field, const PackState& state,
                           int64_t sample_count) {
  // field / 2^r - g_offset * count, evaluated exactly then rounded once.
  mpf_class v(0, std::max<int>(128, he::BitLength(field) + 128));
  v = field;
  mpf_div_2exp(v.get_mpf_t(), v.get_mpf_t(), state.precision);
  mpf_class off(0, 192);
  off = ExactFloat(state.g_offset);
  off *= static_cast<double>(sample_count);
  v -= off;
  return v.get_d();
}

GhSum UnpackGh(const BigInt& value, const PackState& state,
               int64_t sample_count) {
  CheckFits(value, state.gh_bits(), "packed gh");
  BigInt h_int, g_int;
  mpz_fdiv_r_2exp(h_int.get_mpz_t(), value.get_mpz_t(), state.h_bits);
  mpz_fdiv_q_2exp(g_int.get_mpz_t(), value.get_mpz_t(), state.h_bits);
  return {DecodeGradientField(g_int, state, sample_count),
          FixedPointDecode(h_int, state.precision)};
}

void WritePackState(ByteWriter& w, const PackState& s) {
  w.PutU32(static_cast<uint32_t>(s.precision));
  w.PutF64(s.g_offset);
  w.PutF64(s.g_max);
  w.PutF64(s.h_max);
  w.PutU32(static_cast<uint32_t>(s.g_bits));
  w.PutU32(static_cast<uint32_t>(s.h_bits));
  w.PutU32(static_cast<uint32_t>(s.gh_bits()));
  w.PutU64(static_cast<uint64_t>(s.n_instances));
}

PackState ReadPackState(ByteReader& r) {
  PackState s;
  s.precision = static_cast<int>(r.GetU32());
  s.g_offset = r.GetF64();
  s.g_max = r.GetF64();
  s.h_max = r.GetF64();
  s.g_bits = static_cast<int>(r.GetU32());
  s.h_bits = static_cast<int>(r.GetU32());
  uint32_t gh = r.GetU32();
  s.n_instances = static_cast<int64_t>(r.GetU64());
  if (static_cast<int>(gh) != s.gh_bits() || s.g_bits < 1 || s.h_bits < 1) {
    throw ProtocolError("inconsistent pack state bit widths");
  }
  return s;
}

}  // namespace sbt::encoding
