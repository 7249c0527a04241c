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

#include "sbt/tree/goss.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sbt/common/error.h"

namespace sbt::tree {

GossSelection GossSample(std::span<const double> gradient_norms,
                         double top_rate, double other_rate, uint64_t seed) {
  if (!(top_rate > 0 && top_rate <= 1) || !(other_rate > 0 && other_rate <= 1) ||
      top_rate + other_rate > 1 + 1e-12) {
    throw ConfigError("GOSS rates must lie in (0, 1] and sum to at most 1");
  }
  const size_t n = gradient_norms.size();
  GossSelection out;
  if (n == 0) return out;

  auto ceil_count = [n](double rate) {
    // Guard against 0.1 * 2000 = 200.00000000000003 style round-up.
    double x = rate * static_cast<double>(n);
    double r = std::round(x);
    size_t c = std::abs(x - r) < 1e-9 ? static_cast<size_t>(r)
                                      : static_cast<size_t>(std::ceil(x));
    return std::min(c, n);
  };
  const size_t top = ceil_count(top_rate);
  const size_t other = std::min(ceil_count(other_rate), n - top);

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return std::abs(gradient_norms[a]) > std::abs(gradient_norms[b]);
  });

  std::vector<std::pair<uint32_t, double>> picked;
  picked.reserve(top + other);
  for (size_t i = 0; i < top; ++i) picked.emplace_back(order[i], 1.0);

  if (other > 0) {
    std::vector<uint32_t> rest(order.begin() + top, order.end());
    std::mt19937_64 rng(seed);
    // Partial Fisher-Yates: first `other` positions become the sample.
    for (size_t i = 0; i < other; ++i) {
      std::uniform_int_distribution<size_t> pick(i, rest.size() - 1);
      std::swap(rest[i], rest[pick(rng)]);
    }
    const double amplify = (1.0 - top_rate) / other_rate;
    for (size_t i = 0; i < other; ++i) picked.emplace_back(rest[i], amplify);
  }
  std::sort(picked.begin(), picked.end());
  for (auto [idx, m] : picked) {
    out.indices.push_back(idx);
    out.multipliers.push_back(m);
  }
  return out;
}

}  // namespace sbt::tree
