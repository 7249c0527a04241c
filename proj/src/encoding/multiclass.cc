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

#include <algorithm>
#include <string>

#include "sbt/common/error.h"
#include "sbt/encoding/compress.h"

namespace sbt::encoding {

int MulticlassLayout::ClassesIn(int index) const {
  return std::min(classes_per_cipher, classes - index * classes_per_cipher);
}

MulticlassLayout MakeMulticlassLayout(int classes, int plaintext_bits,
                                      int gh_bits) {
  if (classes < 1) throw ConfigError("need at least one class");
  MulticlassLayout layout;
  layout.classes = classes;
  layout.classes_per_cipher = CompressCapacity(plaintext_bits, gh_bits);
  layout.ciphers_per_instance =
      (classes + layout.classes_per_cipher - 1) / layout.classes_per_cipher;
  return layout;
}

PackState ComputeMulticlassPackState(const Matrix& g, const Matrix& h,
                                     int precision, int plaintext_bits) {
  if (g.rows == 0 || g.rows != h.rows || g.cols != h.cols || g.cols == 0) {
    throw ConfigError("gradient/hessian matrices must be non-empty and of "
                      "equal shape");
  }
  auto [gmin, gmax] = std::minmax_element(g.data.begin(), g.data.end());
  auto [hmin, hmax] = std::minmax_element(h.data.begin(), h.data.end());
  if (*hmin < 0) throw ConfigError("hessians must be non-negative");
  double offset = *gmin < 0 ? -*gmin : 0.0;
  return AssignBits(static_cast<int64_t>(g.rows), *gmax, offset, *hmax,
                    precision, plaintext_bits);
}

std::vector<BigInt> PackGhMulticlassRow(std::span<const double> g,
                                        std::span<const double> h,
                                        const PackState& state,
                                        const MulticlassLayout& layout) {
  if (g.size() != static_cast<size_t>(layout.classes) || h.size() != g.size()) {
    throw ConfigError("class vector length does not match layout");
  }
  std::vector<BigInt> out(layout.ciphers_per_instance);
  const int width = state.gh_bits();
  for (int c = 0; c < layout.classes; ++c) {
    BigInt& e = out[c / layout.classes_per_cipher];
    mpz_mul_2exp(e.get_mpz_t(), e.get_mpz_t(), width);
    e += PackGh(g[c], h[c], state);
  }
  return out;
}

EncryptedGhMatrix PackAndEncryptMulticlass(const he::PublicKey& pk,
                                           const Matrix& g, const Matrix& h,
                                           const PackState& state,
                                           he::RandomSource& rng) {
  EncryptedGhMatrix out;
  out.layout =
      MakeMulticlassLayout(static_cast<int>(g.cols), pk.MaxPlaintextBits(),
                           state.gh_bits());
  out.rows.reserve(g.rows);
  for (size_t i = 0; i < g.rows; ++i) {
    std::vector<he::Ciphertext> row;
    for (const BigInt& v : PackGhMulticlassRow(g.row(i), h.row(i), state,
                                               out.layout)) {
      row.push_back(he::Encrypt(pk, v, rng));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

ClassSums RecoverMulticlassSums(std::span<const BigInt> decrypted,
                                const MulticlassLayout& layout,
                                const PackState& state, int64_t sample_count) {
  if (decrypted.size() < static_cast<size_t>(layout.ciphers_per_instance)) {
    throw CorruptionError("expected " +
                          std::to_string(layout.ciphers_per_instance) +
                          " integers for a multi-class split info, got " +
                          std::to_string(decrypted.size()));
  }
  const int width = state.gh_bits();
  ClassSums out;
  out.g.resize(layout.classes);
  out.h.resize(layout.classes);
  for (int k = 0; k < layout.ciphers_per_instance; ++k) {
    const int held = layout.ClassesIn(k);
    CheckFits(decrypted[k], width * held, "multi-class package");
    BigInt rest = decrypted[k];
    for (int j = held - 1; j >= 0; --j) {
      BigInt slot;
      mpz_fdiv_r_2exp(slot.get_mpz_t(), rest.get_mpz_t(), width);
      mpz_fdiv_q_2exp(rest.get_mpz_t(), rest.get_mpz_t(), width);
      GhSum s = UnpackGh(slot, state, sample_count);
      const int cls = k * layout.classes_per_cipher + j;
      out.g[cls] = s.g;
      out.h[cls] = s.h;
    }
  }
  return out;
}

}  // namespace sbt::encoding
