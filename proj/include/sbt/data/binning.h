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

#ifndef SBT_DATA_BINNING_H_
#define SBT_DATA_BINNING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sbt/common/matrix.h"

namespace sbt::data {

inline constexpr int kDefaultMaxBins = 32;
inline constexpr int kMaxBins = 255;

// Sorted upper edges of one feature's bins. A value v falls in bin
// |{e in edges : e < v}|, so the mapping is monotone and values outside the
// training range clamp to the first or last bin.
struct FeatureBins {
  std::vector<double> edges;
  int zero_bin = 0;

  int num_bins() const { return static_cast<int>(edges.size()) + 1; }
  int BinOf(double v) const;
};

// Sparse key-value binned matrix. Entries whose raw value is exactly 0.0 are
// not stored; their bin is the feature's zero_bin.
class BinnedMatrix {
 public:
  struct Entry {
    uint32_t feature;
    uint8_t bin;
  };

  BinnedMatrix() = default;
  BinnedMatrix(std::vector<FeatureBins> bins, size_t num_rows);

  size_t num_rows() const { return row_offsets_.size() - 1; }
  size_t num_features() const { return bins_.size(); }
  const std::vector<FeatureBins>& bins() const { return bins_; }
  const FeatureBins& bins(size_t feature) const { return bins_[feature]; }

  std::span<const Entry> Row(size_t row) const {
    return {entries_.data() + row_offsets_[row],
            entries_.data() + row_offsets_[row + 1]};
  }
  size_t num_stored() const { return entries_.size(); }

  // Bin of (row, feature), falling back to zero_bin for omitted entries.
  int BinAt(size_t row, size_t feature) const;

  // Features whose values were all equal (single effective bin).
  const std::vector<size_t>& constant_features() const {
    return constant_features_;
  }

  // Appends the next row; entries must be in increasing feature order.
  void AppendRow(std::span<const Entry> entries);
  void MarkConstant(size_t feature) { constant_features_.push_back(feature); }

 private:
  std::vector<FeatureBins> bins_;
  std::vector<uint32_t> row_offsets_{0};
  std::vector<Entry> entries_;
  std::vector<size_t> constant_features_;
};

// Per-feature edges at exact empirical quantiles; duplicate edges merge, so a
// feature may end up with fewer than max_bins bins. Throws ConfigError unless
// 2 <= max_bins <= 255.
std::vector<FeatureBins> ComputeQuantileBins(const Matrix& features,
                                             int max_bins);

// Bins values with precomputed edges (training or inference time).
BinnedMatrix ApplyBins(const Matrix& features,
                       const std::vector<FeatureBins>& bins);

BinnedMatrix QuantileBin(const Matrix& features, int max_bins = kDefaultMaxBins);

}  // namespace sbt::data

#endif  // SBT_DATA_BINNING_H_
