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

#ifndef SBT_FEDERATION_SESSION_H_
#define SBT_FEDERATION_SESSION_H_

#include <vector>

#include "sbt/data/dataset.h"
#include "sbt/federation/guest.h"
#include "sbt/federation/host.h"
#include "sbt/federation/transport.h"

namespace sbt::federation {

struct InProcessTraining {
  TrainResult guest;
  std::vector<HostModel> hosts;         // index k-1 holds host k
  std::vector<TransportStats> sent;     // per party, index 0 is the guest
};

// Runs the guest on the calling thread and one thread per host, all talking
// through an InProcNetwork. Host k seeds its anonymous ids with a value
// derived from params.seed and k.
InProcessTraining TrainInProcess(const data::PartyDataset& guest,
                                 const std::vector<data::PartyDataset>& hosts,
                                 const BoostingParams& params,
                                 InProcNetwork::Hook hook = nullptr);

PredictOutput PredictInProcess(const GuestModel& guest_model,
                               const std::vector<HostModel>& host_models,
                               const data::PartyDataset& guest,
                               const std::vector<data::PartyDataset>& hosts,
                               InProcNetwork::Hook hook = nullptr);

// Seed used by host `party` for a session seeded with `seed`.
uint64_t HostSeed(uint64_t seed, int party);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_SESSION_H_
