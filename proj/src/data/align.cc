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

#include "sbt/data/align.h"

#include <openssl/evp.h>

#include <cmath>
#include <map>
#include <numeric>

#include "sbt/common/error.h"

namespace sbt::data {

std::vector<IdDigest> HashIds(std::span<const std::string> ids,
                              std::string_view salt) {
  std::vector<IdDigest> out;
  out.reserve(ids.size());
  for (const std::string& id : ids) {
    std::string message(salt);
    message.push_back('\0');
    message += id;
    IdDigest d;
    unsigned int len = 0;
    if (EVP_Digest(message.data(), message.size(), d.data(), &len,
                   EVP_sha256(), nullptr) != 1 ||
        len != d.size()) {
      throw DataError("SHA-256 failed");
    }
    out.push_back(d);
  }
  return out;
}

std::vector<IdDigest> IntersectDigests(
    std::span<const std::vector<IdDigest>> lists) {
  if (lists.size() < 2) throw DataError("intersection needs >= 2 parties");
  std::map<IdDigest, size_t> seen_in;
  for (size_t p = 1; p < lists.size(); ++p) {
    std::map<IdDigest, bool> local;
    for (const auto& d : lists[p]) local[d] = true;
    for (const auto& [d, unused] : local) ++seen_in[d];
  }
  std::vector<IdDigest> out;
  for (const auto& d : lists[0]) {
    auto it = seen_in.find(d);
    if (it != seen_in.end() && it->second == lists.size() - 1) {
      out.push_back(d);
      it->second = 0;  // emit duplicates once
    }
  }
  if (out.empty()) throw DataError("instance id intersection is empty");
  return out;
}

std::vector<std::string> IntersectIds(
    std::span<const std::vector<std::string>> id_lists, std::string_view salt) {
  std::vector<std::vector<IdDigest>> digests;
  for (const auto& ids : id_lists) digests.push_back(HashIds(ids, salt));
  std::vector<IdDigest> common = IntersectDigests(digests);
  std::map<IdDigest, size_t> index;
  for (size_t i = 0; i < digests[0].size(); ++i) index[digests[0][i]] = i;
  std::vector<std::string> out;
  for (const auto& d : common) out.push_back(id_lists[0][index[d]]);
  return out;
}

PartyDataset AlignRows(const PartyDataset& ds, std::string_view salt,
                       std::span<const IdDigest> order) {
  std::vector<IdDigest> digests = HashIds(ds.instance_ids, salt);
  std::map<IdDigest, size_t> index;
  for (size_t i = 0; i < digests.size(); ++i) index[digests[i]] = i;
  PartyDataset out;
  out.feature_names = ds.feature_names;
  out.features = Matrix(order.size(), ds.features.cols);
  if (ds.labels) out.labels.emplace();
  for (size_t r = 0; r < order.size(); ++r) {
    auto it = index.find(order[r]);
    if (it == index.end()) throw DataError("aligned id missing on this party");
    size_t src = it->second;
    out.instance_ids.push_back(ds.instance_ids[src]);
    std::copy(ds.features.row(src).begin(), ds.features.row(src).end(),
              out.features.row(r).begin());
    if (ds.labels) out.labels->push_back((*ds.labels)[src]);
  }
  return out;
}

std::vector<PartyDataset> VerticalSplit(const PartyDataset& ds,
                                        std::span<const double> fractions) {
  if (fractions.size() < 2) throw ConfigError("need at least two parties");
  double total = std::accumulate(fractions.begin(), fractions.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  const size_t d = ds.num_features();
  std::vector<size_t> bounds{0};
  double cum = 0;
  for (size_t p = 0; p < fractions.size(); ++p) {
    if (fractions[p] < 0) throw ConfigError("negative split fraction");
    cum += fractions[p];
    size_t b = p + 1 == fractions.size()
                   ? d
                   : static_cast<size_t>(std::llround(cum * static_cast<double>(d)));
    bounds.push_back(std::clamp(b, bounds.back(), d));
  }
  std::vector<PartyDataset> parts(fractions.size());
  for (size_t p = 0; p < parts.size(); ++p) {
    PartyDataset& part = parts[p];
    part.instance_ids = ds.instance_ids;
    size_t lo = bounds[p], hi = bounds[p + 1];
    part.feature_names.assign(ds.feature_names.begin() + lo,
                              ds.feature_names.begin() + hi);
    part.features = Matrix(ds.num_instances(), hi - lo);
    for (size_t i = 0; i < ds.num_instances(); ++i) {
      for (size_t c = lo; c < hi; ++c) part.features.at(i, c - lo) = ds.features.at(i, c);
    }
    if (p == 0) part.labels = ds.labels;
  }
  return parts;
}

}  // namespace sbt::data
