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

#ifndef SBT_HE_PAILLIER_H_
#define SBT_HE_PAILLIER_H_

#include <array>
#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <gmpxx.h>

#include "sbt/common/bytes.h"
#include "sbt/he/random.h"

namespace sbt::he {

using BigInt = mpz_class;
using Fingerprint = std::array<uint8_t, 16>;

inline constexpr int kMinKeyBits = 256;

int BitLength(const BigInt& v);

struct PublicKey {
  BigInt n;
  BigInt g;  // always n + 1
  BigInt n_squared;
  int key_bits = 0;
  Fingerprint fingerprint{};

  // The bound iota: every plaintext must be < 2^MaxPlaintextBits().
  int MaxPlaintextBits() const { return BitLength(n) - 1; }

  static PublicKey FromModulus(const BigInt& n);
};

struct SecretKey {
  BigInt lambda;
  BigInt mu;
  Fingerprint fingerprint{};
};

struct KeyPair {
  PublicKey public_key;
  SecretKey secret_key;
};

// Immutable once created; safe to copy and share across threads.
struct Ciphertext {
  BigInt value;
  Fingerprint fingerprint{};
};

// Generates n = p*q with p, q distinct key_bits/2-bit primes. Throws
// ConfigError for key_bits < kMinKeyBits or odd key_bits.
KeyPair GenerateKeyPair(int key_bits, std::optional<uint64_t> seed = {});
KeyPair GenerateKeyPair(int key_bits, RandomSource& rng);

// Throws OverflowError when m is negative or m >= 2^MaxPlaintextBits().
Ciphertext Encrypt(const PublicKey& pk, const BigInt& m, RandomSource& rng);
// Throws KeyError when c was not produced under the matching public key.
BigInt Decrypt(const KeyPair& keys, const Ciphertext& c);

// [[a]] (+) [[b]] = [[a + b]]
Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
// k (x) [[m]] = [[k * m]]
Ciphertext ScalarMul(const PublicKey& pk, const BigInt& k, const Ciphertext& c);
// [[-m mod n]]; used to realise subtraction as addition of the inverse.
Ciphertext Negate(const PublicKey& pk, const Ciphertext& c);
// [[a - b]] = [[a]] (+) [[-b]]; counted as one addition.
Ciphertext Subtract(const PublicKey& pk, const Ciphertext& a,
                    const Ciphertext& b);
// Multiplies by a fresh encryption of zero so equal plaintexts sent twice
// are unlinkable.
Ciphertext Rerandomize(const PublicKey& pk, const Ciphertext& c,
                       RandomSource& rng);

// Ciphertext wire form: u32 length + big-endian value, then the 16-byte key
// fingerprint.
void WriteCiphertext(ByteWriter& w, const Ciphertext& c);
Ciphertext ReadCiphertext(ByteReader& r);

void WritePublicKey(ByteWriter& w, const PublicKey& pk);
PublicKey ReadPublicKey(ByteReader& r);

// Process-wide counters of homomorphic operations, used for cost accounting.
struct OpCounts {
  uint64_t encryptions = 0;
  uint64_t decryptions = 0;
  uint64_t additions = 0;
  uint64_t scalar_muls = 0;
  uint64_t rerandomizations = 0;

  OpCounts operator-(const OpCounts& o) const;
};

OpCounts CurrentOpCounts();
void ResetOpCounts();

std::string FingerprintHex(const Fingerprint& fp);

}  // namespace sbt::he

#endif  // SBT_HE_PAILLIER_H_
