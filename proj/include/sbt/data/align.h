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

#ifndef SBT_DATA_ALIGN_H_
#define SBT_DATA_ALIGN_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbt/data/dataset.h"

namespace sbt::data {

// Salted SHA-256 digest of an instance id. Parties exchange digests instead
// of raw ids; this is a stand-in for a private set intersection protocol and
// offers no protection against dictionary attacks on small id spaces.
using IdDigest = std::array<uint8_t, 32>;

std::vector<IdDigest> HashIds(std::span<const std::string> ids,
                              std::string_view salt);

// Digests present in every list, in the order of the first list. Throws
// DataError for fewer than two lists or an empty intersection.
std::vector<IdDigest> IntersectDigests(
    std::span<const std::vector<IdDigest>> lists);

// Plain-id convenience wrapper over HashIds + IntersectDigests.
std::vector<std::string> IntersectIds(
    std::span<const std::vector<std::string>> id_lists,
    std::string_view salt = "sbtplus");

// Keeps and reorders the rows of `ds` to follow `order`. Throws DataError if
// a digest has no matching row.
PartyDataset AlignRows(const PartyDataset& ds, std::string_view salt,
                       std::span<const IdDigest> order);

// Splits the columns of `ds` into contiguous disjoint blocks whose sizes
// follow `fractions` (rounded on cumulative boundaries). Part 0 is the guest
// and keeps the labels. Throws ConfigError unless fractions sum to 1.
std::vector<PartyDataset> VerticalSplit(const PartyDataset& ds,
                                        std::span<const double> fractions);

}  // namespace sbt::data

#endif  // SBT_DATA_ALIGN_H_
