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

#include "sbt/he/random.h"

#include <openssl/rand.h>

#include <vector>

#include "sbt/common/error.h"

namespace sbt::he {

RandomSource::RandomSource(RandomSource&&) noexcept = default;
RandomSource& RandomSource::operator=(RandomSource&&) noexcept = default;
RandomSource::~RandomSource() = default;

RandomSource RandomSource::FromSeed(uint64_t seed) {
  RandomSource rs;
  rs.state_ = std::make_unique<gmp_randclass>(gmp_randinit_mt);
  mpz_class s;
  mpz_import(s.get_mpz_t(), 1, 1, sizeof(seed), 0, 0, &seed);
  rs.state_->seed(s);
  return rs;
}

RandomSource RandomSource::FromEntropy() { return RandomSource(); }

mpz_class RandomSource::Bits(int bits) {
  if (bits <= 0) return 0;
  if (state_) return state_->get_z_bits(bits);
  std::vector<uint8_t> buf((bits + 7) / 8);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw CryptoError("OS random source failed");
  }
  mpz_class v;
  mpz_import(v.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
  int excess = static_cast<int>(buf.size()) * 8 - bits;
  if (excess > 0) v >>= excess;
  return v;
}

mpz_class RandomSource::Below(const mpz_class& bound) {
  if (bound <= 0) throw CryptoError("random bound must be positive");
  if (state_) return state_->get_z_range(bound);
  int bits = static_cast<int>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  while (true) {
    mpz_class v = Bits(bits);
    if (v < bound) return v;
  }
}

}  // namespace sbt::he
