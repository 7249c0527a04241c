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

#include "sbt/tree/metrics.h"

#include <algorithm>
#include <numeric>
#include <vector>

#include "sbt/common/error.h"

namespace sbt::tree {

double Auc(std::span<const double> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) {
    throw DataError("label and score lengths differ");
  }
  const size_t n = labels.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  double positives = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]] > 0.5) {
        positive_rank_sum += avg_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw DataError("AUC needs both positive and negative labels");
  }
  return (positive_rank_sum - positives * (positives + 1) / 2) /
         (positives * negatives);
}

double Accuracy(std::span<const double> labels, const Matrix& scores) {
  if (labels.size() != scores.rows || scores.rows == 0) {
    throw DataError("label and score row counts differ");
  }
  size_t correct = 0;
  for (size_t i = 0; i < scores.rows; ++i) {
    auto row = scores.row(i);
    size_t best = std::max_element(row.begin(), row.end()) - row.begin();
    if (static_cast<double>(best) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.rows);
}

}  // namespace sbt::tree
