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

#include "sbt/federation/wire.h"

#include "sbt/common/error.h"

namespace sbt::federation {

std::string KindName(MessageKind kind) {
  switch (kind) {
    case MessageKind::kSessionStart: return "SessionStart";
    case MessageKind::kIdDigests: return "IdDigests";
    case MessageKind::kIdAlignment: return "IdAlignment";
    case MessageKind::kEpochGH: return "EpochGH";
    case MessageKind::kSplitRequest: return "SplitRequest";
    case MessageKind::kSplitInfos: return "SplitInfoPackages";
    case MessageKind::kBestSplits: return "BestSplitId";
    case MessageKind::kAssignments: return "NodeAssignment";
    case MessageKind::kTreeEnd: return "TreeEnd";
    case MessageKind::kPredictStart: return "PredictStart";
    case MessageKind::kPredictRequest: return "PredictRequest";
    case MessageKind::kPredictResponse: return "PredictResponse";
    case MessageKind::kShutdown: return "Shutdown";
    case MessageKind::kAbort: return "Abort";
  }
  return "Unknown";
}

Bytes EncodeEnvelope(const Message& m) {
  ByteWriter w;
  w.PutU8(kWireVersion);
  w.PutU8(static_cast<uint8_t>(m.kind));
  w.PutU64(m.session_id);
  w.PutU32(m.epoch);
  w.PutU32(m.layer);
  w.PutU16(m.sender);
  w.PutBytes(m.payload);
  return w.Release();
}

Message DecodeEnvelope(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  uint8_t version = r.GetU8();
  if (version != kWireVersion) {
    throw ProtocolError("unsupported wire version " + std::to_string(version));
  }
  uint8_t kind = r.GetU8();
  if (kind == 0 || kind >= kNumMessageKinds) {
    throw ProtocolError("unknown message kind " + std::to_string(kind));
  }
  Message m;
  m.kind = static_cast<MessageKind>(kind);
  m.session_id = r.GetU64();
  m.epoch = r.GetU32();
  m.layer = r.GetU32();
  m.sender = r.GetU16();
  m.payload = r.GetBytes();
  r.ExpectDone();
  return m;
}

}  // namespace sbt::federation
