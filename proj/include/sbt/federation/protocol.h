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

#ifndef SBT_FEDERATION_PROTOCOL_H_
#define SBT_FEDERATION_PROTOCOL_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sbt/data/align.h"
#include "sbt/encoding/gh_packing.h"
#include "sbt/encoding/multiclass.h"
#include "sbt/federation/wire.h"
#include "sbt/he/paillier.h"

namespace sbt::federation {

// Fixed-size bit vector over the aligned instance order, LSB-first per byte.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(size_t size) : size_(size), bytes_((size + 7) / 8, 0) {}

  size_t size() const { return size_; }
  bool get(size_t i) const { return (bytes_[i / 8] >> (i % 8)) & 1; }
  void set(size_t i, bool v = true) {
    if (v) {
      bytes_[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
    } else {
      bytes_[i / 8] &= static_cast<uint8_t>(~(1u << (i % 8)));
    }
  }
  const Bytes& bytes() const { return bytes_; }

  void Write(ByteWriter& w) const;
  static Bitset Read(ByteReader& r);

  bool operator==(const Bitset&) const = default;

 private:
  size_t size_ = 0;
  Bytes bytes_;
};

// How per-instance gradients are laid out in ciphertexts for one tree.
enum class GhScheme : uint8_t {
  // l class slots packed (g << b_h) + h, spread by MulticlassLayout.
  kPacked = 0,
  // Two ciphertexts per class: encode(g + g_offset) and encode(h).
  kUnpacked = 1,
};

struct SessionStart {
  he::PublicKey public_key;
  uint32_t max_bins = 0;
  std::string id_salt;
  uint16_t num_parties = 0;
};

struct IdList {
  std::vector<data::IdDigest> digests;
};

struct EpochGh {
  uint32_t tree = 0;
  GhScheme scheme = GhScheme::kPacked;
  encoding::PackState state;
  encoding::MulticlassLayout layout;
  uint32_t capacity = 1;  // split infos per ciphertext, 1 disables compressing
  bool subtraction = true;
  // One row per aligned instance, empty when the instance is not sampled.
  std::vector<std::vector<he::Ciphertext>> rows;

  // Ciphertexts per instance.
  size_t width() const;
};

struct SplitRequest {
  uint32_t tree = 0;
  std::vector<uint32_t> nodes;
};

// `ciphers` holds either one compressed ciphertext for all ids, or, when
// ids has a single entry, the full cell of that candidate.
struct WirePackage {
  std::vector<he::Ciphertext> ciphers;
  std::vector<uint64_t> split_ids;
  std::vector<int64_t> sample_counts;
};

struct NodeSplitInfos {
  uint32_t node = 0;
  std::vector<WirePackage> packages;
};

struct SplitInfos {
  uint32_t tree = 0;
  std::vector<NodeSplitInfos> nodes;
};

struct BestSplits {
  uint32_t tree = 0;
  std::vector<std::pair<uint32_t, uint64_t>> choices;  // (node, split id)
};

struct NodeAssignment {
  uint32_t node = 0;
  Bitset left;  // bit i set: aligned instance i goes to the left child
};

struct Assignments {
  uint32_t tree = 0;
  std::vector<NodeAssignment> nodes;
};

struct TreeEnd {
  uint32_t tree = 0;
};

struct PredictStart {
  std::string id_salt;
};

struct PredictRequest {
  std::vector<uint64_t> split_ids;
};

struct PredictResponse {
  std::vector<std::pair<uint64_t, Bitset>> decisions;
};

struct Abort {
  std::string reason;
};

// Each Encode sets the message kind and payload along with its ciphertext tally.
Message Encode(const SessionStart& p);
Message EncodeIdDigests(const IdList& p);
Message EncodeIdAlignment(const IdList& p);
Message Encode(const EpochGh& p);
Message Encode(const SplitRequest& p);
Message Encode(const SplitInfos& p);
Message Encode(const BestSplits& p);
Message Encode(const Assignments& p);
Message Encode(const TreeEnd& p);
Message Encode(const PredictStart& p);
Message Encode(const PredictRequest& p);
Message Encode(const PredictResponse& p);
Message Encode(const Abort& p);
Message MakeShutdown();

// Decoders throw ProtocolError when the kind does not match or the payload
// is malformed.
SessionStart DecodeSessionStart(const Message& m);
IdList DecodeIdList(const Message& m);
EpochGh DecodeEpochGh(const Message& m);
SplitRequest DecodeSplitRequest(const Message& m);
SplitInfos DecodeSplitInfos(const Message& m);
BestSplits DecodeBestSplits(const Message& m);
Assignments DecodeAssignments(const Message& m);
TreeEnd DecodeTreeEnd(const Message& m);
PredictStart DecodePredictStart(const Message& m);
PredictRequest DecodePredictRequest(const Message& m);
PredictResponse DecodePredictResponse(const Message& m);
Abort DecodeAbort(const Message& m);

}  // namespace sbt::federation

#endif  // SBT_FEDERATION_PROTOCOL_H_
