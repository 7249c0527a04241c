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

#ifndef SBT_TESTS_SUPPORT_ORACLE_H_
#define SBT_TESTS_SUPPORT_ORACLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbt/common/matrix.h"
#include "sbt/data/binning.h"
#include "sbt/federation/model.h"

namespace sbt::testing {

// Centralized plaintext gradient boosting over the union of every party's
// binned columns. Dense histograms, no encryption, no protocol.
struct OracleParams {
  int tree_num = 5;
  int max_depth = 3;
  double learning_rate = 0.3;
  double lambda = 0.1;
  double min_gain = 1e-4;
  int min_samples = 2;
  bool goss = false;
  double top_rate = 0.2;
  double other_rate = 0.1;
  uint64_t seed = 42;
  bool multi_output = false;
};

struct OracleNode {
  bool leaf = true;
  int party = 0;
  int feature = -1;
  int bin = -1;
  std::vector<double> weight;
};

struct OracleTree {
  int class_index = -1;
  std::map<uint32_t, OracleNode> nodes;
};

struct OracleModel {
  std::vector<OracleTree> trees;
  Matrix scores;  // n x width raw margins on the training rows
};

// parties[p] holds party p's binned columns; labels are 0/1 for binary or
// class indices when num_classes > 2.
OracleModel TrainOracle(const std::vector<const data::BinnedMatrix*>& parties,
                        const std::vector<double>& labels, int num_classes,
                        const OracleParams& params);

OracleParams OracleParamsFrom(const federation::BoostingParams& params);

// Empty when every federated tree has the oracle's topology, split owners,
// features and bins (host splits resolved through the host shards) and leaf
// weights within relative error weight_tol. Otherwise describes the first difference.
std::string CompareWithOracle(const federation::GuestModel& guest,
                              const std::vector<federation::HostModel>& hosts,
                              const OracleModel& oracle, double weight_tol);

}  // namespace sbt::testing

#endif  // SBT_TESTS_SUPPORT_ORACLE_H_
