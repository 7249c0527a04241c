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

#include "sbt/data/binning.h"

#include <algorithm>
#include <string>

#include "sbt/common/error.h"

namespace sbt::data {

int FeatureBins::BinOf(double v) const {
  return static_cast<int>(std::lower_bound(edges.begin(), edges.end(), v) -
                          edges.begin());
}

BinnedMatrix::BinnedMatrix(std::vector<FeatureBins> bins, size_t num_rows)
    : bins_(std::move(bins)) {
  row_offsets_.reserve(num_rows + 1);
}

int BinnedMatrix::BinAt(size_t row, size_t feature) const {
  auto entries = Row(row);
  auto it = std::lower_bound(
      entries.begin(), entries.end(), feature,
      [](const Entry& e, size_t f) { return e.feature < f; });
  if (it != entries.end() && it->feature == feature) return it->bin;
  return bins_[feature].zero_bin;
}

void BinnedMatrix::AppendRow(std::span<const Entry> entries) {
  entries_.insert(entries_.end(), entries.begin(), entries.end());
  row_offsets_.push_back(static_cast<uint32_t>(entries_.size()));
}

std::vector<FeatureBins> ComputeQuantileBins(const Matrix& features,
                                             int max_bins) {
  if (max_bins < 2 || max_bins > kMaxBins) {
    throw ConfigError("max_bins must be in [2, 255], got " +
                      std::to_string(max_bins));
  }
  const size_t n = features.rows;
  std::vector<FeatureBins> out(features.cols);
  std::vector<double> column(n);
  for (size_t f = 0; f < features.cols; ++f) {
    for (size_t i = 0; i < n; ++i) column[i] = features.at(i, f);
    std::sort(column.begin(), column.end());
    FeatureBins& fb = out[f];
    if (n > 0) {
      const double top = column.back();
      for (int k = 1; k < max_bins; ++k) {
        // Upper edge of bin k-1: the ceil(k n / B)-th smallest value.
        size_t rank = (static_cast<size_t>(k) * n + max_bins - 1) / max_bins;
        if (rank == 0) continue;
        double edge = column[rank - 1];
        if (edge >= top) break;
        if (fb.edges.empty() || edge > fb.edges.back()) fb.edges.push_back(edge);
      }
    }
    fb.zero_bin = fb.BinOf(0.0);
  }
  return out;
}

BinnedMatrix ApplyBins(const Matrix& features,
                       const std::vector<FeatureBins>& bins) {
  if (features.cols != bins.size()) {
    throw DataError("feature count " + std::to_string(features.cols) +
                    " does not match " + std::to_string(bins.size()) +
                    " binned features");
  }
  BinnedMatrix out(bins, features.rows);
  std::vector<BinnedMatrix::Entry> row;
  for (size_t i = 0; i < features.rows; ++i) {
    row.clear();
    for (size_t f = 0; f < features.cols; ++f) {
      double v = features.at(i, f);
      if (v == 0.0) continue;
      row.push_back({static_cast<uint32_t>(f),
                     static_cast<uint8_t>(bins[f].BinOf(v))});
    }
    out.AppendRow(row);
  }
  for (size_t f = 0; f < bins.size(); ++f) {
    if (bins[f].edges.empty()) out.MarkConstant(f);
  }
  return out;
}

BinnedMatrix QuantileBin(const Matrix& features, int max_bins) {
  return ApplyBins(features, ComputeQuantileBins(features, max_bins));
}

}  // namespace sbt::data
