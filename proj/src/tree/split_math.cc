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

#include "sbt/tree/split_math.h"

#include "sbt/common/error.h"

namespace sbt::tree {

double SplitGain(double g_left, double h_left, double g_right, double h_right,
                 double g, double h, double lambda) {
  return 0.5 * (g_left * g_left / (h_left + lambda) +
                g_right * g_right / (h_right + lambda) - g * g / (h + lambda));
}

double LeafWeight(double g_sum, double h_sum, double lambda) {
  return -g_sum / (h_sum + lambda);
}

std::vector<double> MoLeafWeight(std::span<const double> g_sum,
                                 std::span<const double> h_sum, double lambda) {
  if (g_sum.size() != h_sum.size()) throw ConfigError("g/h length mismatch");
  std::vector<double> w(g_sum.size());
  for (size_t j = 0; j < w.size(); ++j) w[j] = LeafWeight(g_sum[j], h_sum[j], lambda);
  return w;
}

double MoScore(std::span<const double> g_sum, std::span<const double> h_sum,
               double lambda) {
  double s = 0;
  for (size_t j = 0; j < g_sum.size(); ++j) {
    s += g_sum[j] * g_sum[j] / (h_sum[j] + lambda);
  }
  return -0.5 * s;
}

double MoGain(std::span<const double> g_left, std::span<const double> h_left,
              std::span<const double> g_parent,
              std::span<const double> h_parent, double lambda) {
  const size_t l = g_parent.size();
  if (g_left.size() != l || h_left.size() != l || h_parent.size() != l) {
    throw ConfigError("class vector length mismatch");
  }
  double left = 0, right = 0, parent = 0;
  for (size_t j = 0; j < l; ++j) {
    double gr = g_parent[j] - g_left[j];
    double hr = h_parent[j] - h_left[j];
    left += g_left[j] * g_left[j] / (h_left[j] + lambda);
    right += gr * gr / (hr + lambda);
    parent += g_parent[j] * g_parent[j] / (h_parent[j] + lambda);
  }
  return 0.5 * (left + right - parent);
}

}  // namespace sbt::tree
