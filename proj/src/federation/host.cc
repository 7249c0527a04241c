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

#include "sbt/federation/host.h"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>

#include "sbt/common/error.h"
#include "sbt/data/align.h"
#include "sbt/data/binning.h"
#include "sbt/encoding/compress.h"
#include "sbt/federation/protocol.h"
#include "sbt/tree/histogram.h"
#include "sbt/tree/tree.h"

namespace sbt::federation {
namespace {

using CipherHistogram = tree::Histogram<he::Ciphertext>;

constexpr int kGuest = tree::kGuestParty;

int DepthOf(uint32_t node) {
  int depth = 0;
  while (node > 0) {
    node = tree::Parent(node);
    ++depth;
  }
  return depth;
}

// Reports the failure to the guest, best effort, then rethrows.
template <typename F>
auto WithAbort(Transport& transport, uint64_t session, F&& body) {
  try {
    return body();
  } catch (const TransportError&) {
    throw;
  } catch (const std::exception& e) {
    try {
      Message m = Encode(Abort{e.what()});
      m.session_id = session;
      transport.Send(kGuest, std::move(m));
    } catch (...) {
    }
    throw;
  }
}

Message ReceiveFromGuest(Transport& transport) {
  Message m = transport.Receive(kGuest);
  if (m.kind == MessageKind::kAbort) {
    throw ProtocolError("guest aborted the session: " + DecodeAbort(m).reason);
  }
  return m;
}

// Aligns the rows of `data` with the guest: sends our digests and applies
// the order the guest returns.
data::PartyDataset AlignWithGuest(const data::PartyDataset& data,
                                  Transport& transport, uint64_t session,
                                  const std::string& salt) {
  IdList mine{data::HashIds(data.instance_ids, salt)};
  Message out = EncodeIdDigests(mine);
  out.session_id = session;
  transport.Send(kGuest, std::move(out));
  Message in = ReceiveFromGuest(transport);
  if (in.kind != MessageKind::kIdAlignment) {
    throw ProtocolError("expected IdAlignment but got " + KindName(in.kind));
  }
  IdList order = DecodeIdList(in);
  if (order.digests.empty()) throw ProtocolError("empty id alignment");
  return data::AlignRows(data, salt, order.digests);
}

class HostTrainer {
 public:
  HostTrainer(const data::PartyDataset& data, Transport& transport,
              const HostOptions& options)
      : raw_(data),
        transport_(transport),
        rng_(options.deterministic_crypto
                 ? he::RandomSource::FromSeed(options.seed ^ 0x5eedc0deULL)
                 : he::RandomSource::FromEntropy()),
        id_rng_(options.seed) {
    model_.party = transport.self();
    model_.feature_names = data.feature_names;
  }

  HostModel Run() {
    Message first = ReceiveFromGuest(transport_);
    session_ = first.session_id;
    return WithAbort(transport_, session_, [&] {
      Start(first);
      while (true) {
        Message m = ReceiveFromGuest(transport_);
        if (m.session_id != session_) {
          throw ProtocolError("message from a different session");
        }
        if (m.kind == MessageKind::kShutdown) {
          if (in_tree_) throw ProtocolError("shutdown in the middle of a tree");
          break;
        }
        Dispatch(m);
      }
      return model_;
    });
  }

 private:
  void Start(const Message& m) {
    SessionStart start = DecodeSessionStart(m);
    if (start.num_parties <= transport_.self()) {
      throw ProtocolError("session does not include this host");
    }
    pk_ = start.public_key;
    data::PartyDataset aligned =
        AlignWithGuest(raw_, transport_, session_, start.id_salt);
    if (start.max_bins < 2 || start.max_bins > data::kMaxBins) {
      throw ProtocolError("invalid max_bins in session start");
    }
    binned_ = data::QuantileBin(aligned.features,
                                static_cast<int>(start.max_bins));
    model_.bins = binned_.bins();
    layout_ = std::make_shared<tree::HistogramLayout>(binned_);
    num_instances_ = binned_.num_rows();
  }

  void Dispatch(const Message& m) {
    switch (m.kind) {
      case MessageKind::kEpochGH:
        BeginTree(m);
        break;
      case MessageKind::kSplitRequest:
        HandleSplitRequest(m);
        break;
      case MessageKind::kBestSplits:
        HandleBestSplits(m);
        break;
      case MessageKind::kAssignments:
        HandleAssignments(m);
        break;
      case MessageKind::kTreeEnd:
        EndTree(m);
        break;
      default:
        throw ProtocolError("unexpected " + KindName(m.kind) +
                            " during training");
    }
  }

  void Send(Message m, const Message& in_reply_to) {
    m.session_id = session_;
    m.epoch = in_reply_to.epoch;
    m.layer = in_reply_to.layer;
    transport_.Send(kGuest, std::move(m));
  }

  void RequireTree(uint32_t tree) const {
    if (!in_tree_ || tree != tree_) {
      throw ProtocolError("message refers to tree " + std::to_string(tree) +
                          " outside the active tree");
    }
  }

  void BeginTree(const Message& m) {
    if (in_tree_) throw ProtocolError("gradients for a new tree mid-tree");
    EpochGh gh = DecodeEpochGh(m);
    if (gh.rows.size() != num_instances_) {
      throw ProtocolError("gradient vector does not match aligned instances");
    }
    if (gh.capacity > 1 && (gh.scheme != GhScheme::kPacked || gh.width() != 1)) {
      throw ProtocolError("compressing requires a single packed ciphertext");
    }
    for (const auto& row : gh.rows) {
      for (const auto& c : row) {
        if (c.fingerprint != pk_.fingerprint) {
          throw KeyError("gradient ciphertext under a foreign key");
        }
      }
    }
    tree_ = gh.tree;
    capacity_ = static_cast<int>(gh.capacity);
    gh_bits_ = gh.state.gh_bits();
    subtraction_ = gh.subtraction;
    width_ = gh.width();
    table_ = std::move(gh.rows);
    nodes_.clear();
    cache_.clear();
    pending_.clear();
    std::vector<uint32_t> all(num_instances_);
    for (uint32_t i = 0; i < num_instances_; ++i) all[i] = i;
    nodes_[0] = std::move(all);
    last_layer_ = -1;
    awaiting_best_ = false;
    in_tree_ = true;
  }

  int64_t SampledCount(const std::vector<uint32_t>& instances) const {
    int64_t n = 0;
    for (uint32_t i : instances) n += table_[i].empty() ? 0 : 1;
    return n;
  }

  CipherHistogram Direct(uint32_t node) const {
    tree::CipherOps ops{&pk_};
    return tree::BuildHistogram<he::Ciphertext>(layout_, binned_,
                                                nodes_.at(node), table_, ops);
  }

  void HandleSplitRequest(const Message& m) {
    if (awaiting_best_) throw ProtocolError("split request before best splits");
    SplitRequest req = DecodeSplitRequest(m);
    RequireTree(req.tree);
    if (static_cast<int>(m.layer) <= last_layer_) {
      throw ProtocolError("split request for a layer already processed");
    }
    std::set<uint32_t> requested;
    for (uint32_t id : req.nodes) {
      if (!nodes_.count(id)) {
        throw ProtocolError("split request for unknown node " +
                            std::to_string(id));
      }
      if (DepthOf(id) != static_cast<int>(m.layer)) {
        throw ProtocolError("node " + std::to_string(id) +
                            " is not in the requested layer");
      }
      if (!requested.insert(id).second) {
        throw ProtocolError("duplicate node in split request");
      }
    }

    tree::CipherOps ops{&pk_};
    std::map<uint32_t, CipherHistogram> hists;
    for (uint32_t id : requested) {
      if (hists.count(id)) continue;
      uint32_t sib = id == 0 ? 0 : tree::Sibling(id);
      bool pair = id != 0 && subtraction_ && requested.count(sib) &&
                  cache_.count(tree::Parent(id));
      if (!pair) {
        hists.emplace(id, Direct(id));
        continue;
      }
      uint32_t left = std::min(id, sib);
      uint32_t right = std::max(id, sib);
      int64_t nl = SampledCount(nodes_.at(left));
      int64_t nr = SampledCount(nodes_.at(right));
      uint32_t small = nr < nl ? right : left;
      uint32_t large = small == left ? right : left;
      CipherHistogram direct = Direct(small);
      hists.emplace(large, tree::SubtractHistogram(
                               cache_.at(tree::Parent(id)), direct, ops));
      hists.emplace(small, std::move(direct));
    }

    SplitInfos reply;
    reply.tree = tree_;
    pending_.clear();
    for (auto& [id, hist] : hists) {
      reply.nodes.push_back(MakeNodeInfos(id, hist));
    }
    cache_.clear();
    if (subtraction_) cache_ = std::move(hists);
    last_layer_ = static_cast<int>(m.layer);
    awaiting_best_ = true;
    Send(Encode(reply), m);
  }

  uint64_t FreshId() {
    while (true) {
      uint64_t id = id_rng_();
      if (!pending_.count(id) && !model_.splits.count(id)) return id;
    }
  }

  NodeSplitInfos MakeNodeInfos(uint32_t node, const CipherHistogram& hist) {
    tree::CipherOps ops{&pk_};
    auto candidates = tree::CumulativeCandidates(hist, ops, true);
    std::shuffle(candidates.begin(), candidates.end(), id_rng_);
    NodeSplitInfos out;
    out.node = node;
    if (width_ == 1) {
      std::vector<encoding::SplitInfo> infos;
      infos.reserve(candidates.size());
      for (auto& c : candidates) {
        uint64_t id = FreshId();
        pending_[id] = {node, HostSplit{c.feature, c.bin}};
        infos.push_back({std::move(c.left.values[0]), id, c.left.count});
      }
      for (auto& pkg :
           encoding::CompressSplitInfos(pk_, infos, capacity_, gh_bits_)) {
        out.packages.push_back({{he::Rerandomize(pk_, pkg.cipher, rng_)},
                                std::move(pkg.split_ids),
                                std::move(pkg.sample_counts)});
      }
    } else {
      for (auto& c : candidates) {
        uint64_t id = FreshId();
        pending_[id] = {node, HostSplit{c.feature, c.bin}};
        WirePackage pkg;
        for (const auto& v : c.left.values) {
          pkg.ciphers.push_back(he::Rerandomize(pk_, v, rng_));
        }
        pkg.split_ids.push_back(id);
        pkg.sample_counts.push_back(c.left.count);
        out.packages.push_back(std::move(pkg));
      }
    }
    return out;
  }

  void HandleBestSplits(const Message& m) {
    if (!awaiting_best_) throw ProtocolError("best splits without a request");
    BestSplits best = DecodeBestSplits(m);
    RequireTree(best.tree);
    Assignments reply;
    reply.tree = tree_;
    std::set<uint32_t> seen;
    for (const auto& [node, id] : best.choices) {
      auto it = pending_.find(id);
      if (it == pending_.end() || it->second.first != node) {
        throw ProtocolError("best split id was not offered for node " +
                            std::to_string(node));
      }
      if (!seen.insert(node).second) {
        throw ProtocolError("two best splits for one node");
      }
      const HostSplit& split = it->second.second;
      model_.splits[id] = split;
      NodeAssignment a{node, Bitset(num_instances_)};
      for (uint32_t i : nodes_.at(node)) {
        if (binned_.BinAt(i, split.feature) <= split.bin) a.left.set(i);
      }
      reply.nodes.push_back(std::move(a));
    }
    pending_.clear();
    awaiting_best_ = false;
    Send(Encode(reply), m);
  }

  void HandleAssignments(const Message& m) {
    if (awaiting_best_) throw ProtocolError("assignments before best splits");
    Assignments in = DecodeAssignments(m);
    RequireTree(in.tree);
    for (const auto& a : in.nodes) {
      auto it = nodes_.find(a.node);
      if (it == nodes_.end()) {
        throw ProtocolError("assignment for unknown node " +
                            std::to_string(a.node));
      }
      if (a.left.size() != num_instances_) {
        throw ProtocolError("assignment bitset has the wrong length");
      }
      std::vector<uint32_t> left, right;
      for (uint32_t i : it->second) (a.left.get(i) ? left : right).push_back(i);
      nodes_[tree::LeftChild(a.node)] = std::move(left);
      nodes_[tree::RightChild(a.node)] = std::move(right);
      nodes_.erase(a.node);
    }
  }

  void EndTree(const Message& m) {
    if (awaiting_best_) throw ProtocolError("tree ended before best splits");
    RequireTree(DecodeTreeEnd(m).tree);
    in_tree_ = false;
    table_.clear();
    nodes_.clear();
    cache_.clear();
  }

  const data::PartyDataset& raw_;
  Transport& transport_;
  he::RandomSource rng_;
  std::mt19937_64 id_rng_;
  uint64_t session_ = 0;

  he::PublicKey pk_;
  data::BinnedMatrix binned_;
  std::shared_ptr<const tree::HistogramLayout> layout_;
  size_t num_instances_ = 0;
  HostModel model_;

  bool in_tree_ = false;
  bool awaiting_best_ = false;
  uint32_t tree_ = 0;
  int last_layer_ = -1;
  int capacity_ = 1;
  int gh_bits_ = 0;
  bool subtraction_ = true;
  size_t width_ = 1;
  tree::GhTable<he::Ciphertext> table_;
  std::map<uint32_t, std::vector<uint32_t>> nodes_;
  std::map<uint32_t, CipherHistogram> cache_;
  std::unordered_map<uint64_t, std::pair<uint32_t, HostSplit>> pending_;
};

}  // namespace

HostModel RunHostTraining(const data::PartyDataset& data, Transport& transport,
                          const HostOptions& options) {
  data.Validate();
  HostTrainer trainer(data, transport, options);
  return trainer.Run();
}

void RunHostPrediction(const data::PartyDataset& data, const HostModel& model,
                       Transport& transport) {
  data.Validate();
  Message first = ReceiveFromGuest(transport);
  const uint64_t session = first.session_id;
  WithAbort(transport, session, [&] {
    PredictStart start = DecodePredictStart(first);
    if (data.num_features() != model.bins.size()) {
      throw DataError("host data has " + std::to_string(data.num_features()) +
                      " features but the model expects " +
                      std::to_string(model.bins.size()));
    }
    data::PartyDataset aligned =
        AlignWithGuest(data, transport, session, start.id_salt);
    data::BinnedMatrix binned = data::ApplyBins(aligned.features, model.bins);

    Message in = ReceiveFromGuest(transport);
    PredictRequest req = DecodePredictRequest(in);
    PredictResponse resp;
    for (uint64_t id : req.split_ids) {
      resp.decisions.emplace_back(id, HostDecide(model, binned, id));
    }
    Message out = Encode(resp);
    out.session_id = session;
    transport.Send(kGuest, std::move(out));

    Message end = ReceiveFromGuest(transport);
    if (end.kind != MessageKind::kShutdown) {
      throw ProtocolError("expected Shutdown but got " + KindName(end.kind));
    }
    return 0;
  });
}

}  // namespace sbt::federation
