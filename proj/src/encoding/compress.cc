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

#include "sbt/encoding/compress.h"

#include <algorithm>
#include <string>

#include "sbt/common/error.h"

namespace sbt::encoding {

int CompressCapacity(int plaintext_bits, int gh_bits) {
  if (gh_bits <= 0 || gh_bits > plaintext_bits) {
    throw ConfigError("packed width " + std::to_string(gh_bits) +
                      " does not fit a " + std::to_string(plaintext_bits) +
                      "-bit plaintext");
  }
  return plaintext_bits / gh_bits;
}

std::vector<SplitInfoPackage> CompressSplitInfos(
    const he::PublicKey& pk, std::span<const SplitInfo> infos, int capacity,
    int gh_bits) {
  if (capacity < 1) throw ConfigError("compress capacity must be >= 1");
  std::vector<SplitInfoPackage> packages;
  packages.reserve((infos.size() + capacity - 1) / capacity);
  BigInt shift = 1;
  mpz_mul_2exp(shift.get_mpz_t(), shift.get_mpz_t(), gh_bits);

  for (const SplitInfo& info : infos) {
    if (packages.empty() ||
        packages.back().size() == static_cast<size_t>(capacity)) {
      packages.push_back({info.aggregate, {}, {}});
    } else {
      SplitInfoPackage& p = packages.back();
      p.cipher = he::Add(pk, he::ScalarMul(pk, shift, p.cipher), info.aggregate);
    }
    packages.back().split_ids.push_back(info.split_id);
    packages.back().sample_counts.push_back(info.sample_count);
  }
  return packages;
}

std::vector<DecompressedEntry> DecompressPackage(const BigInt& plain,
                                                 const SplitInfoPackage& meta,
                                                 const PackState& state,
                                                 int capacity) {
  const size_t count = meta.split_ids.size();
  if (count == 0 || count != meta.sample_counts.size() ||
      count > static_cast<size_t>(capacity)) {
    throw CorruptionError("split-info package metadata lists " +
                          std::to_string(count) + " entries (capacity " +
                          std::to_string(capacity) + ")");
  }
  const int width = state.gh_bits();
  BigInt rest = plain;
  std::vector<DecompressedEntry> out(count);
  // Least significant slot holds the last folded entry.
  for (size_t k = 0; k < count; ++k) {
    DecompressedEntry& e = out[count - 1 - k];
    mpz_fdiv_r_2exp(e.packed.get_mpz_t(), rest.get_mpz_t(), width);
    mpz_fdiv_q_2exp(rest.get_mpz_t(), rest.get_mpz_t(), width);
  }
  if (rest != 0) {
    throw CorruptionError("package plaintext holds more entries than its "
                          "metadata lists");
  }
  for (size_t i = 0; i < count; ++i) {
    out[i].split_id = meta.split_ids[i];
    out[i].sample_count = meta.sample_counts[i];
    out[i].sum = UnpackGh(out[i].packed, state, out[i].sample_count);
  }
  return out;
}

}  // namespace sbt::encoding
