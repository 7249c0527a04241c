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

#ifndef SBT_FEDERATION_HOST_H_
#define SBT_FEDERATION_HOST_H_

#include <cstdint>

#include "sbt/data/dataset.h"
#include "sbt/federation/model.h"
#include "sbt/federation/transport.h"

namespace sbt::federation {

struct HostOptions {
  // Seeds anonymous split ids and candidate shuffling.
  uint64_t seed = 0;
  // Seed re-randomization noise as well (tests only).
  bool deterministic_crypto = false;
};

// Serves one training session for the guest reachable through `transport`
// (party 0) until Shutdown. Any failure is reported to the guest with an
// Abort message before it propagates.
HostModel RunHostTraining(const data::PartyDataset& data, Transport& transport,
                          const HostOptions& options);

// Serves one prediction session: id alignment, then branch decisions for the
// split ids the guest asks about.
void RunHostPrediction(const data::PartyDataset& data, const HostModel& model,
                       Transport& transport);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_HOST_H_
