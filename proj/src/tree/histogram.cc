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

#include "sbt/tree/histogram.h"

namespace sbt::tree {

HistogramLayout::HistogramLayout(const data::BinnedMatrix& binned) {
  offsets_.push_back(0);
  for (const auto& fb : binned.bins()) {
    num_bins_.push_back(fb.num_bins());
    zero_bins_.push_back(fb.zero_bin);
    offsets_.push_back(offsets_.back() + static_cast<size_t>(fb.num_bins()));
  }
}

}  // namespace sbt::tree
