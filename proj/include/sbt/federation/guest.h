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

#ifndef SBT_FEDERATION_GUEST_H_
#define SBT_FEDERATION_GUEST_H_

#include <string>
#include <vector>

#include "sbt/common/matrix.h"
#include "sbt/data/dataset.h"
#include "sbt/federation/model.h"
#include "sbt/federation/params.h"
#include "sbt/federation/transport.h"
#include "sbt/he/paillier.h"

namespace sbt::federation {

struct TreeLog {
  int tree = 0;
  int epoch = 0;
  int class_index = -1;
  int owner = -1;
  int leaves = 0;
  int depth = 0;
  // Split infos per compressed ciphertext; 0 when no host took part.
  int capacity = 0;
  double seconds = 0.0;
  // Traffic seen by the guest endpoint while this tree was built.
  TransportStats sent;
  TransportStats received;
  // Process-wide homomorphic operation counts for this tree.
  he::OpCounts ops;
};

struct EpochLog {
  int epoch = 0;
  double loss = 0.0;
  double metric = 0.0;  // training AUC (binary) or accuracy (multiclass)
  int64_t sampled = 0;
  double seconds = 0.0;
};

struct TrainingLog {
  std::vector<EpochLog> epochs;
  std::vector<TreeLog> trees;
};

struct TrainResult {
  GuestModel model;
  std::vector<std::string> instance_ids;  // aligned training order
  Matrix train_scores;                    // raw margins, n x output_width
  TrainingLog log;
};

// Drives a training session as the guest (party 0). `transport` may be null
// when num_hosts is 0.
TrainResult RunGuestTraining(const data::PartyDataset& data,
                             const BoostingParams& params,
                             Transport* transport, int num_hosts);

struct PredictOutput {
  std::vector<std::string> instance_ids;  // aligned prediction order
  Matrix raw;
  Matrix probabilities;
};

// Federated inference: aligns ids with every host of the model, collects the
// host split decisions and walks the trees.
PredictOutput RunGuestPrediction(const data::PartyDataset& data,
                                 const GuestModel& model, Transport* transport,
                                 const std::string& id_salt = "sbtplus");

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_GUEST_H_
