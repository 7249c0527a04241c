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

#include "sbt/he/paillier.h"

#include <openssl/evp.h>

#include <cstdio>

#include "sbt/common/error.h"

namespace sbt::he {
namespace {

struct AtomicCounts {
  std::atomic<uint64_t> encryptions{0};
  std::atomic<uint64_t> decryptions{0};
  std::atomic<uint64_t> additions{0};
  std::atomic<uint64_t> scalar_muls{0};
  std::atomic<uint64_t> rerandomizations{0};
};

AtomicCounts& Counts() {
  static AtomicCounts counts;
  return counts;
}

Fingerprint ComputeFingerprint(const BigInt& n) {
  Bytes bytes = BigUintToBytes(n);
  uint8_t digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw CryptoError("SHA-256 failed");
  }
  Fingerprint fp;
  std::copy(digest, digest + fp.size(), fp.begin());
  return fp;
}

void CheckKey(const PublicKey& pk, const Ciphertext& c) {
  if (c.fingerprint != pk.fingerprint) {
    throw KeyError("ciphertext key fingerprint " +
                   FingerprintHex(c.fingerprint) + " does not match key " +
                   FingerprintHex(pk.fingerprint));
  }
}

// Random prime with exactly `bits` bits and its two top bits set, so that the
// product of two such primes has exactly 2*bits bits.
BigInt RandomPrime(int bits, RandomSource& rng) {
  while (true) {
    BigInt candidate = rng.Bits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    BigInt p;
    mpz_nextprime(p.get_mpz_t(), candidate.get_mpz_t());
    if (BitLength(p) == bits) return p;
  }
}

// Random r in [1, n) with gcd(r, n) = 1.
BigInt RandomUnit(const PublicKey& pk, RandomSource& rng) {
  while (true) {
    BigInt r = rng.Below(pk.n);
    if (r == 0) continue;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n.get_mpz_t());
    if (g == 1) return r;
  }
}

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& mod) {
  BigInt out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(),
           mod.get_mpz_t());
  return out;
}

}  // namespace

int BitLength(const BigInt& v) {
  if (v == 0) return 0;
  return static_cast<int>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

PublicKey PublicKey::FromModulus(const BigInt& n) {
  PublicKey pk;
  pk.n = n;
  pk.g = n + 1;
  pk.n_squared = n * n;
  pk.key_bits = BitLength(n);
  pk.fingerprint = ComputeFingerprint(n);
  return pk;
}

KeyPair GenerateKeyPair(int key_bits, std::optional<uint64_t> seed) {
  RandomSource rng =
      seed ? RandomSource::FromSeed(*seed) : RandomSource::FromEntropy();
  return GenerateKeyPair(key_bits, rng);
}

KeyPair GenerateKeyPair(int key_bits, RandomSource& rng) {
  if (key_bits < kMinKeyBits || key_bits % 2 != 0) {
    throw ConfigError("key_bits must be even and >= " +
                      std::to_string(kMinKeyBits) + ", got " +
                      std::to_string(key_bits));
  }
  const int half = key_bits / 2;
  BigInt p, q;
  do {
    p = RandomPrime(half, rng);
    q = RandomPrime(half, rng);
  } while (p == q);

  KeyPair keys;
  keys.public_key = PublicKey::FromModulus(p * q);
  BigInt p1 = p - 1, q1 = q - 1;
  mpz_lcm(keys.secret_key.lambda.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
  // With g = n + 1, L(g^lambda mod n^2) = lambda mod n.
  if (mpz_invert(keys.secret_key.mu.get_mpz_t(),
                 keys.secret_key.lambda.get_mpz_t(),
                 keys.public_key.n.get_mpz_t()) == 0) {
    throw CryptoError("lambda not invertible modulo n");
  }
  keys.secret_key.fingerprint = keys.public_key.fingerprint;
  return keys;
}

Ciphertext Encrypt(const PublicKey& pk, const BigInt& m, RandomSource& rng) {
  if (sgn(m) < 0 || BitLength(m) > pk.MaxPlaintextBits()) {
    throw OverflowError("plaintext of " + std::to_string(BitLength(m)) +
                        " bits exceeds the " +
                        std::to_string(pk.MaxPlaintextBits()) +
                        "-bit plaintext bound");
  }
  Counts().encryptions.fetch_add(1, std::memory_order_relaxed);
  // (1 + m*n) * r^n mod n^2
  BigInt gm = (1 + m * pk.n) % pk.n_squared;
  BigInt rn = PowMod(RandomUnit(pk, rng), pk.n, pk.n_squared);
  Ciphertext c;
  c.value = gm * rn % pk.n_squared;
  c.fingerprint = pk.fingerprint;
  return c;
}

BigInt Decrypt(const KeyPair& keys, const Ciphertext& c) {
  const PublicKey& pk = keys.public_key;
  CheckKey(pk, c);
  if (sgn(c.value) < 0 || c.value >= pk.n_squared) {
    throw CorruptionError("ciphertext value out of range");
  }
  Counts().decryptions.fetch_add(1, std::memory_order_relaxed);
  BigInt u = PowMod(c.value, keys.secret_key.lambda, pk.n_squared);
  BigInt l = (u - 1) / pk.n;
  return l * keys.secret_key.mu % pk.n;
}

Ciphertext Add(const PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  CheckKey(pk, a);
  CheckKey(pk, b);
  Counts().additions.fetch_add(1, std::memory_order_relaxed);
  return {a.value * b.value % pk.n_squared, pk.fingerprint};
}

Ciphertext ScalarMul(const PublicKey& pk, const BigInt& k, const Ciphertext& c) {
  CheckKey(pk, c);
  if (sgn(k) < 0) throw OverflowError("scalar must be non-negative");
  Counts().scalar_muls.fetch_add(1, std::memory_order_relaxed);
  return {PowMod(c.value, k, pk.n_squared), pk.fingerprint};
}

Ciphertext Negate(const PublicKey& pk, const Ciphertext& c) {
  CheckKey(pk, c);
  Ciphertext out{0, pk.fingerprint};
  if (mpz_invert(out.value.get_mpz_t(), c.value.get_mpz_t(),
                 pk.n_squared.get_mpz_t()) == 0) {
    throw CryptoError("ciphertext not invertible");
  }
  return out;
}

Ciphertext Subtract(const PublicKey& pk, const Ciphertext& a,
                    const Ciphertext& b) {
  return Add(pk, a, Negate(pk, b));
}

Ciphertext Rerandomize(const PublicKey& pk, const Ciphertext& c,
                       RandomSource& rng) {
  CheckKey(pk, c);
  Counts().rerandomizations.fetch_add(1, std::memory_order_relaxed);
  BigInt rn = PowMod(RandomUnit(pk, rng), pk.n, pk.n_squared);
  return {c.value * rn % pk.n_squared, pk.fingerprint};
}

void WriteCiphertext(ByteWriter& w, const Ciphertext& c) {
  w.PutBigUint(c.value);
  w.PutRaw(c.fingerprint);
}

Ciphertext ReadCiphertext(ByteReader& r) {
  Ciphertext c;
  c.value = r.GetBigUint();
  auto fp = r.GetRaw(c.fingerprint.size());
  std::copy(fp.begin(), fp.end(), c.fingerprint.begin());
  return c;
}

void WritePublicKey(ByteWriter& w, const PublicKey& pk) {
  w.PutBigUint(pk.n);
}

PublicKey ReadPublicKey(ByteReader& r) {
  BigInt n = r.GetBigUint();
  if (BitLength(n) < kMinKeyBits - 1) {
    throw ProtocolError("public key modulus too small");
  }
  return PublicKey::FromModulus(n);
}

OpCounts OpCounts::operator-(const OpCounts& o) const {
  return {encryptions - o.encryptions, decryptions - o.decryptions,
          additions - o.additions, scalar_muls - o.scalar_muls,
          rerandomizations - o.rerandomizations};
}

OpCounts CurrentOpCounts() {
  auto& c = Counts();
  return {c.encryptions.load(), c.decryptions.load(), c.additions.load(),
          c.scalar_muls.load(), c.rerandomizations.load()};
}

void ResetOpCounts() {
  auto& c = Counts();
  c.encryptions = 0;
  c.decryptions = 0;
  c.additions = 0;
  c.scalar_muls = 0;
  c.rerandomizations = 0;
}

std::string FingerprintHex(const Fingerprint& fp) {
  std::string out;
  char buf[3];
  for (uint8_t b : fp) {
    std::snprintf(buf, sizeof(buf), "%02x", b);
    out += buf;
  }
  return out;
}

}  // namespace sbt::he
