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

#ifndef SBT_FEDERATION_WIRE_H_
#define SBT_FEDERATION_WIRE_H_

#include <cstdint>
#include <string>

#include "sbt/common/bytes.h"

namespace sbt::federation {

inline constexpr uint8_t kWireVersion = 1;

enum class MessageKind : uint8_t {
  kSessionStart = 1,
  kIdDigests = 2,
  kIdAlignment = 3,
  kEpochGH = 4,
  kSplitRequest = 5,
  kSplitInfos = 6,
  kBestSplits = 7,
  kAssignments = 8,
  kTreeEnd = 9,
  kPredictStart = 10,
  kPredictRequest = 11,
  kPredictResponse = 12,
  kShutdown = 13,
  kAbort = 14,
};

inline constexpr int kNumMessageKinds = 15;

std::string KindName(MessageKind kind);

// Envelope layout (all integers big-endian):
//
//   u8  version        kWireVersion
//   u8  kind           MessageKind
//   u64 session_id
//   u32 epoch          boosting epoch (0 outside training)
//   u32 layer          tree layer (0 when not layer-scoped)
//   u16 sender         party index, 0 = guest
//   u32 payload_len
//   ... payload
//
// On TCP every envelope is additionally framed by a u32 length.
struct Message {
  MessageKind kind = MessageKind::kAbort;
  uint64_t session_id = 0;
  uint32_t epoch = 0;
  uint32_t layer = 0;
  uint16_t sender = 0;
  Bytes payload;
  // Local bookkeeping, not serialized: ciphertexts carried by the payload.
  uint64_t ciphertexts = 0;
};

Bytes EncodeEnvelope(const Message& m);
// Throws ProtocolError on a version mismatch or a malformed frame.
Message DecodeEnvelope(std::span<const uint8_t> bytes);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_WIRE_H_
