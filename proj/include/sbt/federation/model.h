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

#ifndef SBT_FEDERATION_MODEL_H_
#define SBT_FEDERATION_MODEL_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sbt/common/matrix.h"
#include "sbt/data/binning.h"
#include "sbt/federation/params.h"
#include "sbt/federation/protocol.h"
#include "sbt/tree/tree.h"

namespace sbt::federation {

enum class Task { kBinary, kMulticlass };

// The guest's shard: full topology with guest-owned splits and leaf weights,
// plus the guest's bin edges. Host-owned splits appear only as (party, split id).
struct GuestModel {
  Task task = Task::kBinary;
  int num_classes = 2;
  int num_hosts = 0;
  BoostingParams params;
  std::vector<std::string> feature_names;
  std::vector<data::FeatureBins> bins;
  std::vector<tree::Tree> trees;

  // Score columns: 1 for binary, num_classes otherwise.
  int output_width() const { return task == Task::kBinary ? 1 : num_classes; }
  // Host-owned split ids referenced by the trees, per host party.
  std::map<int, std::vector<uint64_t>> HostSplitIds() const;
};

struct HostSplit {
  uint32_t feature = 0;
  int bin = 0;  // left branch takes bins <= bin
};

// A host's shard: its bin edges and the anonymous split id table.
struct HostModel {
  int party = 1;
  std::vector<std::string> feature_names;
  std::vector<data::FeatureBins> bins;
  std::map<uint64_t, HostSplit> splits;
};

// Branch decisions of host-owned splits over the prediction rows, keyed by
// (party, split id).
using HostDecisions = std::map<std::pair<int, uint64_t>, Bitset>;

// Left-branch bitset of a host split over `binned` rows. Throws ProtocolError
// for an unknown split id.
Bitset HostDecide(const HostModel& model, const data::BinnedMatrix& binned,
                  uint64_t split_id);

// Raw margins (n x output_width) by walking every tree. Throws ProtocolError
// when a host decision is missing.
Matrix PredictRaw(const GuestModel& model, const data::BinnedMatrix& binned,
                  const HostDecisions& decisions);

// Sigmoid for binary (one column), softmax rows otherwise.
Matrix Probabilities(const GuestModel& model, const Matrix& raw);

// Deterministic JSON documents; equal models give byte-identical text.
std::string SerializeGuestModel(const GuestModel& model);
GuestModel ParseGuestModel(const std::string& text);
std::string SerializeHostModel(const HostModel& model);
HostModel ParseHostModel(const std::string& text);

void SaveGuestModel(const std::string& path, const GuestModel& model);
GuestModel LoadGuestModel(const std::string& path);
void SaveHostModel(const std::string& path, const HostModel& model);
HostModel LoadHostModel(const std::string& path);

std::string TaskName(Task task);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_MODEL_H_
