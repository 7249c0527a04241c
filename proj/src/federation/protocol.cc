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

#include "sbt/federation/protocol.h"

#include <algorithm>

#include "sbt/common/error.h"

namespace sbt::federation {
namespace {

constexpr uint32_t kMaxCount = 1u << 28;

uint32_t GetCount(ByteReader& r) {
  uint32_t n = r.GetU32();
  if (n > kMaxCount || n > r.remaining()) {
    throw ProtocolError("element count " + std::to_string(n) +
                        " exceeds payload size");
  }
  return n;
}

void Expect(const Message& m, MessageKind kind) {
  if (m.kind != kind) {
    throw ProtocolError("expected " + KindName(kind) + " but got " +
                        KindName(m.kind));
  }
}

Message Finish(MessageKind kind, ByteWriter& w, uint64_t ciphertexts = 0) {
  Message m;
  m.kind = kind;
  m.payload = w.Release();
  m.ciphertexts = ciphertexts;
  return m;
}

void WriteCiphers(ByteWriter& w, const std::vector<he::Ciphertext>& cs) {
  w.PutU32(static_cast<uint32_t>(cs.size()));
  for (const auto& c : cs) he::WriteCiphertext(w, c);
}

std::vector<he::Ciphertext> ReadCiphers(ByteReader& r) {
  uint32_t n = GetCount(r);
  std::vector<he::Ciphertext> out;
  out.reserve(n);
  for (uint32_t i = 0; i < n; ++i) out.push_back(he::ReadCiphertext(r));
  return out;
}

void WriteIds(ByteWriter& w, const IdList& p) {
  w.PutU32(static_cast<uint32_t>(p.digests.size()));
  for (const auto& d : p.digests) w.PutRaw(d);
}

template <typename T>
T Parse(const Message& m, MessageKind kind, T (*body)(ByteReader&)) {
  Expect(m, kind);
  ByteReader r(m.payload);
  T out = body(r);
  r.ExpectDone();
  return out;
}

}  // namespace

void Bitset::Write(ByteWriter& w) const {
  w.PutU32(static_cast<uint32_t>(size_));
  w.PutRaw(bytes_);
}

Bitset Bitset::Read(ByteReader& r) {
  uint32_t size = r.GetU32();
  size_t nbytes = (static_cast<size_t>(size) + 7) / 8;
  if (nbytes > r.remaining()) throw ProtocolError("truncated bitset");
  Bitset b(size);
  auto raw = r.GetRaw(nbytes);
  std::copy(raw.begin(), raw.end(), b.bytes_.begin());
  if (size % 8 != 0 && (b.bytes_.back() >> (size % 8)) != 0) {
    throw ProtocolError("bitset has bits set past its size");
  }
  return b;
}

size_t EpochGh::width() const {
  return scheme == GhScheme::kPacked
             ? static_cast<size_t>(layout.ciphers_per_instance)
             : 2 * static_cast<size_t>(layout.classes);
}

Message Encode(const SessionStart& p) {
  ByteWriter w;
  he::WritePublicKey(w, p.public_key);
  w.PutU32(p.max_bins);
  w.PutString(p.id_salt);
  w.PutU16(p.num_parties);
  return Finish(MessageKind::kSessionStart, w);
}

SessionStart DecodeSessionStart(const Message& m) {
  return Parse<SessionStart>(m, MessageKind::kSessionStart, [](ByteReader& r) {
    SessionStart p;
    p.public_key = he::ReadPublicKey(r);
    p.max_bins = r.GetU32();
    p.id_salt = r.GetString();
    p.num_parties = r.GetU16();
    return p;
  });
}

Message EncodeIdDigests(const IdList& p) {
  ByteWriter w;
  WriteIds(w, p);
  return Finish(MessageKind::kIdDigests, w);
}

Message EncodeIdAlignment(const IdList& p) {
  ByteWriter w;
  WriteIds(w, p);
  return Finish(MessageKind::kIdAlignment, w);
}

IdList DecodeIdList(const Message& m) {
  if (m.kind != MessageKind::kIdDigests && m.kind != MessageKind::kIdAlignment) {
    throw ProtocolError("expected an id list but got " + KindName(m.kind));
  }
  ByteReader r(m.payload);
  uint32_t n = GetCount(r);
  IdList p;
  p.digests.resize(n);
  for (auto& d : p.digests) {
    auto raw = r.GetRaw(d.size());
    std::copy(raw.begin(), raw.end(), d.begin());
  }
  r.ExpectDone();
  return p;
}

Message Encode(const EpochGh& p) {
  ByteWriter w;
  w.PutU32(p.tree);
  w.PutU8(static_cast<uint8_t>(p.scheme));
  encoding::WritePackState(w, p.state);
  w.PutU32(static_cast<uint32_t>(p.layout.classes));
  w.PutU32(static_cast<uint32_t>(p.layout.classes_per_cipher));
  w.PutU32(static_cast<uint32_t>(p.layout.ciphers_per_instance));
  w.PutU32(p.capacity);
  w.PutU8(p.subtraction ? 1 : 0);
  w.PutU32(static_cast<uint32_t>(p.rows.size()));
  uint64_t count = 0;
  for (const auto& row : p.rows) {
    w.PutU8(row.empty() ? 0 : 1);
    if (row.empty()) continue;
    if (row.size() != p.width()) {
      throw ProtocolError("gradient row width does not match the scheme");
    }
    for (const auto& c : row) he::WriteCiphertext(w, c);
    count += row.size();
  }
  return Finish(MessageKind::kEpochGH, w, count);
}

EpochGh DecodeEpochGh(const Message& m) {
  return Parse<EpochGh>(m, MessageKind::kEpochGH, [](ByteReader& r) {
    EpochGh p;
    p.tree = r.GetU32();
    uint8_t scheme = r.GetU8();
    if (scheme > 1) throw ProtocolError("unknown gradient scheme");
    p.scheme = static_cast<GhScheme>(scheme);
    p.state = encoding::ReadPackState(r);
    p.layout.classes = static_cast<int>(r.GetU32());
    p.layout.classes_per_cipher = static_cast<int>(r.GetU32());
    p.layout.ciphers_per_instance = static_cast<int>(r.GetU32());
    if (p.layout.classes < 1 || p.layout.classes_per_cipher < 1 ||
        p.layout.ciphers_per_instance < 1 || p.layout.classes > 1 << 16 ||
        p.layout.ciphers_per_instance * p.layout.classes_per_cipher <
            p.layout.classes) {
      throw ProtocolError("inconsistent class layout");
    }
    p.capacity = r.GetU32();
    if (p.capacity < 1) throw ProtocolError("capacity must be >= 1");
    p.subtraction = r.GetU8() != 0;
    uint32_t n = GetCount(r);
    if (n == 0) throw ProtocolError("gradient broadcast with no instances");
    p.rows.resize(n);
    const size_t width = p.width();
    for (auto& row : p.rows) {
      if (r.GetU8() == 0) continue;
      row.reserve(width);
      for (size_t k = 0; k < width; ++k) row.push_back(he::ReadCiphertext(r));
    }
    return p;
  });
}

Message Encode(const SplitRequest& p) {
  ByteWriter w;
  w.PutU32(p.tree);
  w.PutU32(static_cast<uint32_t>(p.nodes.size()));
  for (uint32_t id : p.nodes) w.PutU32(id);
  return Finish(MessageKind::kSplitRequest, w);
}

SplitRequest DecodeSplitRequest(const Message& m) {
  return Parse<SplitRequest>(m, MessageKind::kSplitRequest, [](ByteReader& r) {
    SplitRequest p;
    p.tree = r.GetU32();
    uint32_t n = GetCount(r);
    for (uint32_t i = 0; i < n; ++i) p.nodes.push_back(r.GetU32());
    return p;
  });
}

Message Encode(const SplitInfos& p) {
  ByteWriter w;
  uint64_t count = 0;
  w.PutU32(p.tree);
  w.PutU32(static_cast<uint32_t>(p.nodes.size()));
  for (const auto& node : p.nodes) {
    w.PutU32(node.node);
    w.PutU32(static_cast<uint32_t>(node.packages.size()));
    for (const auto& pkg : node.packages) {
      if (pkg.split_ids.size() != pkg.sample_counts.size()) {
        throw ProtocolError("package metadata lengths differ");
      }
      WriteCiphers(w, pkg.ciphers);
      count += pkg.ciphers.size();
      w.PutU32(static_cast<uint32_t>(pkg.split_ids.size()));
      for (size_t i = 0; i < pkg.split_ids.size(); ++i) {
        w.PutU64(pkg.split_ids[i]);
        w.PutU64(static_cast<uint64_t>(pkg.sample_counts[i]));
      }
    }
  }
  return Finish(MessageKind::kSplitInfos, w, count);
}

SplitInfos DecodeSplitInfos(const Message& m) {
  return Parse<SplitInfos>(m, MessageKind::kSplitInfos, [](ByteReader& r) {
    SplitInfos p;
    p.tree = r.GetU32();
    uint32_t nodes = GetCount(r);
    p.nodes.resize(nodes);
    for (auto& node : p.nodes) {
      node.node = r.GetU32();
      uint32_t packages = GetCount(r);
      node.packages.resize(packages);
      for (auto& pkg : node.packages) {
        pkg.ciphers = ReadCiphers(r);
        uint32_t ids = GetCount(r);
        if (ids == 0 || pkg.ciphers.empty()) {
          throw ProtocolError("empty split-info package");
        }
        for (uint32_t i = 0; i < ids; ++i) {
          pkg.split_ids.push_back(r.GetU64());
          pkg.sample_counts.push_back(static_cast<int64_t>(r.GetU64()));
        }
      }
    }
    return p;
  });
}

Message Encode(const BestSplits& p) {
  ByteWriter w;
  w.PutU32(p.tree);
  w.PutU32(static_cast<uint32_t>(p.choices.size()));
  for (const auto& [node, id] : p.choices) {
    w.PutU32(node);
    w.PutU64(id);
  }
  return Finish(MessageKind::kBestSplits, w);
}

BestSplits DecodeBestSplits(const Message& m) {
  return Parse<BestSplits>(m, MessageKind::kBestSplits, [](ByteReader& r) {
    BestSplits p;
    p.tree = r.GetU32();
    uint32_t n = GetCount(r);
    for (uint32_t i = 0; i < n; ++i) {
      uint32_t node = r.GetU32();
      p.choices.emplace_back(node, r.GetU64());
    }
    return p;
  });
}

Message Encode(const Assignments& p) {
  ByteWriter w;
  w.PutU32(p.tree);
  w.PutU32(static_cast<uint32_t>(p.nodes.size()));
  for (const auto& a : p.nodes) {
    w.PutU32(a.node);
    a.left.Write(w);
  }
  return Finish(MessageKind::kAssignments, w);
}

Assignments DecodeAssignments(const Message& m) {
  return Parse<Assignments>(m, MessageKind::kAssignments, [](ByteReader& r) {
    Assignments p;
    p.tree = r.GetU32();
    uint32_t n = GetCount(r);
    for (uint32_t i = 0; i < n; ++i) {
      NodeAssignment a;
      a.node = r.GetU32();
      a.left = Bitset::Read(r);
      p.nodes.push_back(std::move(a));
    }
    return p;
  });
}

Message Encode(const TreeEnd& p) {
  ByteWriter w;
  w.PutU32(p.tree);
  return Finish(MessageKind::kTreeEnd, w);
}

TreeEnd DecodeTreeEnd(const Message& m) {
  return Parse<TreeEnd>(m, MessageKind::kTreeEnd, [](ByteReader& r) {
    return TreeEnd{r.GetU32()};
  });
}

Message Encode(const PredictStart& p) {
  ByteWriter w;
  w.PutString(p.id_salt);
  return Finish(MessageKind::kPredictStart, w);
}

PredictStart DecodePredictStart(const Message& m) {
  return Parse<PredictStart>(m, MessageKind::kPredictStart, [](ByteReader& r) {
    return PredictStart{r.GetString()};
  });
}

Message Encode(const PredictRequest& p) {
  ByteWriter w;
  w.PutU32(static_cast<uint32_t>(p.split_ids.size()));
  for (uint64_t id : p.split_ids) w.PutU64(id);
  return Finish(MessageKind::kPredictRequest, w);
}

PredictRequest DecodePredictRequest(const Message& m) {
  return Parse<PredictRequest>(
      m, MessageKind::kPredictRequest, [](ByteReader& r) {
        PredictRequest p;
        uint32_t n = GetCount(r);
        for (uint32_t i = 0; i < n; ++i) p.split_ids.push_back(r.GetU64());
        return p;
      });
}

Message Encode(const PredictResponse& p) {
  ByteWriter w;
  w.PutU32(static_cast<uint32_t>(p.decisions.size()));
  for (const auto& [id, bits] : p.decisions) {
    w.PutU64(id);
    bits.Write(w);
  }
  return Finish(MessageKind::kPredictResponse, w);
}

PredictResponse DecodePredictResponse(const Message& m) {
  return Parse<PredictResponse>(
      m, MessageKind::kPredictResponse, [](ByteReader& r) {
        PredictResponse p;
        uint32_t n = GetCount(r);
        for (uint32_t i = 0; i < n; ++i) {
          uint64_t id = r.GetU64();
          p.decisions.emplace_back(id, Bitset::Read(r));
        }
        return p;
      });
}

Message Encode(const Abort& p) {
  ByteWriter w;
  w.PutString(p.reason);
  return Finish(MessageKind::kAbort, w);
}

Abort DecodeAbort(const Message& m) {
  return Parse<Abort>(m, MessageKind::kAbort, [](ByteReader& r) {
    return Abort{r.GetString()};
  });
}

Message MakeShutdown() {
  ByteWriter w;
  return Finish(MessageKind::kShutdown, w);
}

}  // namespace sbt::federation
