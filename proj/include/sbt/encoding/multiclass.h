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

#ifndef SBT_ENCODING_MULTICLASS_H_
#define SBT_ENCODING_MULTICLASS_H_

#include <span>
#include <vector>

#include "sbt/common/matrix.h"
#include "sbt/encoding/gh_packing.h"
#include "sbt/he/paillier.h"

namespace sbt::encoding {

// How the k per-class (g, h) pairs of one instance are spread over
// ciphertexts: classes_per_cipher = floor(iota / b_gh) and
// ciphers_per_instance = ceil(k / classes_per_cipher).
struct MulticlassLayout {
  int classes = 1;
  int classes_per_cipher = 1;
  int ciphers_per_instance = 1;

  // Number of classes held by the cipher at `index`.
  int ClassesIn(int index) const;
};

MulticlassLayout MakeMulticlassLayout(int classes, int plaintext_bits,
                                      int gh_bits);

// Pack state over the whole n x k gradient/hessian matrices.
PackState ComputeMulticlassPackState(const Matrix& g, const Matrix& h,
                                     int precision, int plaintext_bits);

// Packs one instance's class vectors into ciphers_per_instance integers.
// Within each integer class order is most-significant-first, so class 0
// sits in the top slot of the first integer.
std::vector<BigInt> PackGhMulticlassRow(std::span<const double> g,
                                        std::span<const double> h,
                                        const PackState& state,
                                        const MulticlassLayout& layout);

struct EncryptedGhMatrix {
  MulticlassLayout layout;
  std::vector<std::vector<he::Ciphertext>> rows;
};

EncryptedGhMatrix PackAndEncryptMulticlass(const he::PublicKey& pk,
                                           const Matrix& g, const Matrix& h,
                                           const PackState& state,
                                           he::RandomSource& rng);

struct ClassSums {
  std::vector<double> g;
  std::vector<double> h;
};

// Recovers per-class (sum g, sum h) from the decrypted integers of a summed
// cipher vector. Throws CorruptionError if fewer than ciphers_per_instance
// integers are supplied or a slot overflows.
ClassSums RecoverMulticlassSums(std::span<const BigInt> decrypted,
                                const MulticlassLayout& layout,
                                const PackState& state, int64_t sample_count);

}  // namespace sbt::encoding

#endif  // SBT_ENCODING_MULTICLASS_H_
