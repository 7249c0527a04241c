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

#include <gtest/gtest.h>

#include "sbt/common/error.h"
#include "sbt/federation/protocol.h"

namespace sbt::federation {
namespace {

Message RoundTrip(const Message& m) {
  Message back = DecodeEnvelope(EncodeEnvelope(m));
  EXPECT_EQ(back.kind, m.kind);
  EXPECT_EQ(back.payload, m.payload);
  return back;
}

TEST(EnvelopeTest, RoundTripAndLayout) {
  Message m;
  m.kind = MessageKind::kSplitRequest;
  m.session_id = 0x1122334455667788ULL;
  m.epoch = 7;
  m.layer = 2;
  m.sender = 3;
  m.payload = {9, 8, 7};
  Bytes raw = EncodeEnvelope(m);
  ASSERT_EQ(raw.size(), 1 + 1 + 8 + 4 + 4 + 2 + 4 + 3u);
  EXPECT_EQ(raw[0], kWireVersion);
  EXPECT_EQ(raw[1], 5);
  EXPECT_EQ(raw[2], 0x11);
  Message back = DecodeEnvelope(raw);
  EXPECT_EQ(back.session_id, m.session_id);
  EXPECT_EQ(back.epoch, 7u);
  EXPECT_EQ(back.layer, 2u);
  EXPECT_EQ(back.sender, 3);
  EXPECT_EQ(back.payload, m.payload);
}

TEST(EnvelopeTest, RejectsMalformed) {
  Message m;
  m.kind = MessageKind::kTreeEnd;
  Bytes raw = EncodeEnvelope(m);
  Bytes bad_version = raw;
  bad_version[0] = 99;
  EXPECT_THROW(DecodeEnvelope(bad_version), ProtocolError);
  Bytes bad_kind = raw;
  bad_kind[1] = 200;
  EXPECT_THROW(DecodeEnvelope(bad_kind), ProtocolError);
  Bytes zero_kind = raw;
  zero_kind[1] = 0;
  EXPECT_THROW(DecodeEnvelope(zero_kind), ProtocolError);
  Bytes truncated(raw.begin(), raw.end() - 1);
  EXPECT_THROW(DecodeEnvelope(truncated), ProtocolError);
}

TEST(EnvelopeTest, KindNames) {
  EXPECT_EQ(KindName(MessageKind::kSplitInfos), "SplitInfoPackages");
  EXPECT_EQ(KindName(MessageKind::kBestSplits), "BestSplitId");
  EXPECT_EQ(KindName(MessageKind::kAssignments), "NodeAssignment");
}

TEST(BitsetTest, RoundTripAndStrayBits) {
  Bitset b(11);
  b.set(0);
  b.set(10);
  ByteWriter w;
  b.Write(w);
  ByteReader r(w.data());
  Bitset back = Bitset::Read(r);
  EXPECT_EQ(back, b);
  EXPECT_TRUE(back.get(10));
  EXPECT_FALSE(back.get(5));
  Bytes raw = w.data();
  raw.back() |= 0x80;  // bit 15, past the size
  ByteReader bad(raw);
  EXPECT_THROW(Bitset::Read(bad), ProtocolError);
}

class ProtocolTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { keys_ = new he::KeyPair(he::GenerateKeyPair(256, 1)); }
  static void TearDownTestSuite() {
    delete keys_;
    keys_ = nullptr;
  }
  static he::KeyPair* keys_;
};

he::KeyPair* ProtocolTest::keys_ = nullptr;

TEST_F(ProtocolTest, SessionStartAndIds) {
  SessionStart s{keys_->public_key, 32, "salt", 3};
  SessionStart back = DecodeSessionStart(RoundTrip(Encode(s)));
  EXPECT_EQ(back.public_key.n, s.public_key.n);
  EXPECT_EQ(back.max_bins, 32u);
  EXPECT_EQ(back.id_salt, "salt");
  EXPECT_EQ(back.num_parties, 3);
  IdList ids;
  ids.digests.resize(2);
  ids.digests[1][0] = 7;
  Message m = EncodeIdDigests(ids);
  EXPECT_EQ(m.kind, MessageKind::kIdDigests);
  EXPECT_EQ(DecodeIdList(RoundTrip(m)).digests, ids.digests);
  EXPECT_EQ(EncodeIdAlignment(ids).kind, MessageKind::kIdAlignment);
}

TEST_F(ProtocolTest, EpochGhCarriesCiphertexts) {
  he::RandomSource rng = he::RandomSource::FromSeed(2);
  EpochGh e;
  e.tree = 4;
  e.scheme = GhScheme::kUnpacked;
  e.state = encoding::AssignBits(3, 1, 1, 0.25, 20, 255);
  e.layout = encoding::MakeMulticlassLayout(1, 255, e.state.gh_bits());
  e.capacity = 1;
  e.subtraction = false;
  e.rows = {{he::Encrypt(keys_->public_key, 1, rng),
             he::Encrypt(keys_->public_key, 2, rng)},
            {},
            {he::Encrypt(keys_->public_key, 3, rng),
             he::Encrypt(keys_->public_key, 4, rng)}};
  Message m = Encode(e);
  EXPECT_EQ(m.ciphertexts, 4u);
  EpochGh back = DecodeEpochGh(RoundTrip(m));
  EXPECT_EQ(back.tree, 4u);
  EXPECT_EQ(back.scheme, GhScheme::kUnpacked);
  EXPECT_FALSE(back.subtraction);
  ASSERT_EQ(back.rows.size(), 3u);
  EXPECT_TRUE(back.rows[1].empty());
  EXPECT_EQ(he::Decrypt(*keys_, back.rows[2][1]), 4);
  EXPECT_EQ(back.state.g_bits, e.state.g_bits);
}

TEST_F(ProtocolTest, SplitMessages) {
  he::RandomSource rng = he::RandomSource::FromSeed(3);
  SplitRequest req{1, {3, 4}};
  EXPECT_EQ(DecodeSplitRequest(RoundTrip(Encode(req))).nodes, req.nodes);

  SplitInfos infos;
  infos.tree = 1;
  infos.nodes.push_back(
      {3, {{{he::Encrypt(keys_->public_key, 5, rng)}, {11, 12}, {4, 5}}}});
  Message m = Encode(infos);
  EXPECT_EQ(m.ciphertexts, 1u);
  SplitInfos back = DecodeSplitInfos(RoundTrip(m));
  ASSERT_EQ(back.nodes.size(), 1u);
  EXPECT_EQ(back.nodes[0].packages[0].split_ids, (std::vector<uint64_t>{11, 12}));
  EXPECT_EQ(back.nodes[0].packages[0].sample_counts, (std::vector<int64_t>{4, 5}));

  BestSplits best{1, {{3, 11}, {4, 99}}};
  EXPECT_EQ(DecodeBestSplits(RoundTrip(Encode(best))).choices, best.choices);

  Assignments a;
  a.tree = 1;
  Bitset left(5);
  left.set(2);
  a.nodes.push_back({3, left});
  Assignments aback = DecodeAssignments(RoundTrip(Encode(a)));
  EXPECT_EQ(aback.nodes[0].left, left);
  EXPECT_EQ(DecodeTreeEnd(RoundTrip(Encode(TreeEnd{9}))).tree, 9u);
}

TEST_F(ProtocolTest, PredictionAndControl) {
  EXPECT_EQ(DecodePredictStart(RoundTrip(Encode(PredictStart{"s"}))).id_salt, "s");
  PredictRequest req{{1, 2, 3}};
  EXPECT_EQ(DecodePredictRequest(RoundTrip(Encode(req))).split_ids, req.split_ids);
  Bitset b(3);
  b.set(1);
  PredictResponse resp{{{2, b}}};
  EXPECT_EQ(DecodePredictResponse(RoundTrip(Encode(resp))).decisions, resp.decisions);
  EXPECT_EQ(DecodeAbort(RoundTrip(Encode(Abort{"boom"}))).reason, "boom");
  EXPECT_EQ(MakeShutdown().kind, MessageKind::kShutdown);
}

TEST_F(ProtocolTest, DecodersRejectWrongKindAndGarbage) {
  Message m = Encode(TreeEnd{1});
  EXPECT_THROW(DecodeSplitRequest(m), ProtocolError);
  m.payload.push_back(0);
  EXPECT_THROW(DecodeTreeEnd(m), ProtocolError);
  Message empty = Encode(SplitRequest{1, {2}});
  empty.payload.resize(2);
  EXPECT_THROW(DecodeSplitRequest(empty), ProtocolError);
  EpochGh e;
  e.state = encoding::AssignBits(3, 1, 1, 0.25, 20, 255);
  EXPECT_THROW(DecodeEpochGh(Encode(e)), ProtocolError);
}

}  // namespace
}  // namespace sbt::federation
