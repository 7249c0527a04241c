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

#ifndef SBT_HE_RANDOM_H_
#define SBT_HE_RANDOM_H_

#include <cstdint>
#include <memory>

#include <gmpxx.h>

namespace sbt::he {

// Source of big-integer randomness for key generation and encryption noise.
// FromEntropy() draws from the OpenSSL CSPRNG; FromSeed() is a reproducible
// Mersenne Twister stream meant for tests only. Not thread-safe: give each
// party its own instance.
class RandomSource {
 public:
  static RandomSource FromSeed(uint64_t seed);
  static RandomSource FromEntropy();

  RandomSource(RandomSource&&) noexcept;
  RandomSource& operator=(RandomSource&&) noexcept;
  ~RandomSource();

  // Uniform in [0, bound).
  mpz_class Below(const mpz_class& bound);
  // Uniform with `bits` random bits (top bit not forced).
  mpz_class Bits(int bits);

  bool deterministic() const { return state_ != nullptr; }

 private:
  RandomSource() = default;
  std::unique_ptr<gmp_randclass> state_;  // null => OS CSPRNG
};

}  // namespace sbt::he

#endif  // SBT_HE_RANDOM_H_
