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

#include "sbt/federation/params.h"

#include "sbt/common/error.h"
#include "sbt/he/paillier.h"

namespace sbt::federation {

BoostingParams BoostingParams::Baseline() {
  BoostingParams p;
  p.gh_packing = false;
  p.hist_subtraction = false;
  p.cipher_compress = false;
  return p;
}

void BoostingParams::Validate(int num_hosts) const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw ConfigError(key + ": " + why);
  };
  if (num_hosts < 0) fail("host_data", "negative host count");
  if (tree_num < 1) fail("tree_num", "must be >= 1");
  if (max_depth < 1 || max_depth > 30) fail("max_depth", "must be in [1, 30]");
  if (!(learning_rate > 0.0)) fail("learning_rate", "must be > 0");
  if (max_bins < 2 || max_bins > data::kMaxBins) {
    fail("max_bins", "must be in [2, 255]");
  }
  if (!(lambda >= 0.0)) fail("lambda", "must be >= 0");
  if (!(min_gain >= 0.0)) fail("min_gain", "must be >= 0");
  if (min_samples < 1) fail("min_samples", "must be >= 1");
  if (precision < encoding::kMinPrecision ||
      precision > encoding::kMaxPrecision) {
    fail("precision", "must be in [10, 60]");
  }
  if (key_bits < he::kMinKeyBits || key_bits % 2 != 0) {
    fail("key_bits", "must be an even number >= 256");
  }
  if (goss) {
    if (!(top_rate > 0.0 && top_rate <= 1.0)) fail("top_rate", "must be in (0, 1]");
    if (!(other_rate > 0.0 && other_rate <= 1.0)) {
      fail("other_rate", "must be in (0, 1]");
    }
    if (top_rate + other_rate > 1.0) {
      fail("top_rate", "top_rate + other_rate must be <= 1");
    }
  }
  if (cipher_compress && !gh_packing) {
    fail("cipher_compress", "requires gh_packing");
  }
  mode.Validate(max_depth, num_hosts);
}

}  // namespace sbt::federation
