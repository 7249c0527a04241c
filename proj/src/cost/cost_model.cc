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

#include "sbt/cost/cost_model.h"

#include <cmath>
#include <string>

#include "sbt/common/error.h"
#include "sbt/encoding/compress.h"
#include "sbt/encoding/gh_packing.h"

namespace sbt::cost {

double CostParams::nodes() const { return std::ldexp(1.0, depth); }

void CostParams::Validate() const {
  if (!(n_instances > 0) || !(n_features > 0) || !(n_bins > 0)) {
    throw ConfigError("instance, feature and bin counts must be positive");
  }
  if (depth < 0 || depth > 62) throw ConfigError("depth must be in [0, 62]");
  if (capacity < 1) throw ConfigError("capacity must be >= 1");
}

CostEstimate EstimateBaseline(const CostParams& p) {
  p.Validate();
  const double n_i = p.n_instances, n_f = p.n_features, n_b = p.n_bins;
  const double h = p.depth, n_n = p.nodes();
  CostEstimate c;
  c.comp = 2 * n_i * h * n_f + 2 * n_n * n_f * n_b;
  c.ende = 2 * n_i + 2 * n_b * n_f * n_n;
  c.comm = c.ende;
  return c;
}

CostEstimate EstimateOptimized(const CostParams& p) {
  p.Validate();
  const double n_i = p.n_instances, n_f = p.n_features, n_b = p.n_bins;
  const double h = p.depth, n_n = p.nodes();
  CostEstimate c;
  c.comp = 0.5 * n_i * h * n_f + n_n * n_f * n_b;
  c.ende = n_i + n_b * n_f * n_n / p.capacity;
  c.comm = c.ende;
  return c;
}

CostEstimate Reduction(const CostEstimate& baseline,
                       const CostEstimate& optimized) {
  return {1 - optimized.comp / baseline.comp, 1 - optimized.ende / baseline.ende,
          1 - optimized.comm / baseline.comm};
}

int CapacityFor(double n_instances, int key_bits, int precision) {
  if (!(n_instances >= 1)) throw ConfigError("n_instances must be >= 1");
  const int iota = key_bits - 1;
  encoding::PackState s =
      encoding::AssignBits(static_cast<int64_t>(n_instances), 1.0, 1.0, 1.0,
                           precision, iota);
  return encoding::CompressCapacity(iota, s.gh_bits());
}

}  // namespace sbt::cost
