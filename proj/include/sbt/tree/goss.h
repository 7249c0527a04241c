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

#ifndef SBT_TREE_GOSS_H_
#define SBT_TREE_GOSS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace sbt::tree {

struct GossSelection {
  std::vector<uint32_t> indices;     // ascending instance indices
  std::vector<double> multipliers;   // parallel to indices
};

// Gradient-based one-side sampling: keeps the ceil(top_rate n) instances with
// the largest gradient norm, then draws ceil(other_rate n) uniformly from the
// rest and amplifies their g and h by (1 - top_rate) / other_rate. Ties in
// the norm are broken by instance index. Throws ConfigError unless both rates
// are in (0, 1] and top_rate + other_rate <= 1.
GossSelection GossSample(std::span<const double> gradient_norms,
                         double top_rate, double other_rate, uint64_t seed);

}  // namespace sbt::tree

#endif  // SBT_TREE_GOSS_H_
