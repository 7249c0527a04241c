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

#ifndef SBT_ENCODING_COMPRESS_H_
#define SBT_ENCODING_COMPRESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sbt/encoding/gh_packing.h"
#include "sbt/he/paillier.h"

namespace sbt::encoding {

// Number of packed aggregates one plaintext can hold: floor(iota / b_gh).
int CompressCapacity(int plaintext_bits, int gh_bits);

// A candidate split's encrypted left aggregate as produced by a host.
struct SplitInfo {
  he::Ciphertext aggregate;
  uint64_t split_id = 0;
  int64_t sample_count = 0;
};

// Several split infos folded into one ciphertext. Entries are ordered
// most-significant-first: split_ids[0] occupies the highest b_gh-bit slot.
struct SplitInfoPackage {
  he::Ciphertext cipher;
  std::vector<uint64_t> split_ids;
  std::vector<int64_t> sample_counts;

  size_t size() const { return split_ids.size(); }
};

struct DecompressedEntry {
  GhSum sum;
  BigInt packed;  // raw b_gh-bit field before unpacking
  uint64_t split_id = 0;
  int64_t sample_count = 0;
};

// Folds the infos, capacity at a time, as e = e * 2^b_gh + [[gh_l]].
std::vector<SplitInfoPackage> CompressSplitInfos(
    const he::PublicKey& pk, std::span<const SplitInfo> infos, int capacity,
    int gh_bits);

// Splits a decrypted package back into its entries, in fold order. Throws
// CorruptionError when the plaintext holds more or fewer entries than the
// package metadata lists, or more than `capacity`.
std::vector<DecompressedEntry> DecompressPackage(const BigInt& plain,
                                                 const SplitInfoPackage& meta,
                                                 const PackState& state,
                                                 int capacity);

}  // namespace sbt::encoding

#endif  // SBT_ENCODING_COMPRESS_H_
