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

#ifndef SBT_COST_COST_MODEL_H_
#define SBT_COST_COST_MODEL_H_

#include <cstdint>

namespace sbt::cost {

// Abstract per-tree operation counts.
struct CostParams {
  double n_instances = 0;  // n_i
  double n_features = 0;   // n_f
  double n_bins = 0;       // n_b
  int depth = 0;           // h; tree nodes n_n = 2^h
  int capacity = 1;        // eta_s, packed split infos per ciphertext
  int key_bits = 1024;
  int precision = 53;

  double nodes() const;
  // Throws ConfigError on non-positive sizes or capacity < 1. Depth may be 0.
  void Validate() const;
};

struct CostEstimate {
  double comp = 0;  // homomorphic additions
  double ende = 0;  // encryptions plus decryptions
  double comm = 0;  // ciphertexts transferred
};

CostEstimate EstimateBaseline(const CostParams& p);
CostEstimate EstimateOptimized(const CostParams& p);

// 1 - optimized / baseline, per quantity.
CostEstimate Reduction(const CostEstimate& baseline,
                       const CostEstimate& optimized);

// eta_s implied by key_bits, precision and n_instances under unit gradient
// and hessian bounds (g_offset = g_max = h_max = 1).
int CapacityFor(double n_instances, int key_bits, int precision);

}  // namespace sbt::cost

#endif  // SBT_COST_COST_MODEL_H_
