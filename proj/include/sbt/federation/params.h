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

#ifndef SBT_FEDERATION_PARAMS_H_
#define SBT_FEDERATION_PARAMS_H_

#include <cstdint>
#include <string>

#include "sbt/data/binning.h"
#include "sbt/encoding/gh_packing.h"
#include "sbt/modes/modes.h"
#include "sbt/tree/split_math.h"

namespace sbt::federation {

struct BoostingParams {
  int tree_num = 25;  // boosting epochs
  int max_depth = 5;
  double learning_rate = 0.3;
  int max_bins = data::kDefaultMaxBins;
  double lambda = tree::kDefaultLambda;
  double min_gain = tree::kDefaultMinGain;
  int min_samples = tree::kDefaultMinSamples;

  int precision = encoding::kDefaultPrecision;
  int key_bits = 1024;

  bool goss = false;
  double top_rate = 0.2;
  double other_rate = 0.1;

  bool gh_packing = true;
  bool hist_subtraction = true;
  bool cipher_compress = true;

  modes::ModeConfig mode;

  uint64_t seed = 42;
  // Draw key material and encryption noise from `seed` instead of the OS
  // CSPRNG. Only meant for tests.
  bool deterministic_crypto = false;
  std::string id_salt = "sbtplus";

  // Every optimization off: the reference pipeline.
  static BoostingParams Baseline();

  // Throws ConfigError naming the offending key.
  void Validate(int num_hosts) const;
};

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_PARAMS_H_
