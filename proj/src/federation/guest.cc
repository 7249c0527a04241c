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

#include "sbt/federation/guest.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <tuple>

#include "sbt/common/error.h"
#include "sbt/data/align.h"
#include "sbt/data/binning.h"
#include "sbt/encoding/compress.h"
#include "sbt/encoding/multiclass.h"
#include "sbt/federation/protocol.h"
#include "sbt/modes/modes.h"
#include "sbt/tree/goss.h"
#include "sbt/tree/histogram.h"
#include "sbt/tree/loss.h"
#include "sbt/tree/metrics.h"
#include "sbt/tree/split_math.h"
#include "sbt/tree/tree.h"

namespace sbt::federation {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

TransportStats Delta(const TransportStats& now, const TransportStats& before) {
  TransportStats d;
  d.messages = now.messages - before.messages;
  d.bytes = now.bytes - before.bytes;
  d.ciphertexts = now.ciphertexts - before.ciphertexts;
  for (size_t i = 0; i < d.by_kind.size(); ++i) {
    d.by_kind[i] = now.by_kind[i] - before.by_kind[i];
    d.ciphertexts_by_kind[i] =
        now.ciphertexts_by_kind[i] - before.ciphertexts_by_kind[i];
  }
  return d;
}

// Thin wrapper adding session stamping and Abort handling.
class Channel {
 public:
  Channel(Transport* transport, uint64_t session)
      : transport_(transport), session_(session) {}

  void Send(int to, Message m, uint32_t epoch = 0, uint32_t layer = 0) {
    m.session_id = session_;
    m.epoch = epoch;
    m.layer = layer;
    transport_->Send(to, std::move(m));
  }

  Message Receive(int from, MessageKind kind) {
    Message m = transport_->Receive(from);
    if (m.kind == MessageKind::kAbort) {
      throw ProtocolError("host " + std::to_string(from) +
                          " aborted: " + DecodeAbort(m).reason);
    }
    if (m.session_id != session_) {
      throw ProtocolError("message from a different session");
    }
    if (m.kind != kind) {
      throw ProtocolError("expected " + KindName(kind) + " from host " +
                          std::to_string(from) + " but got " +
                          KindName(m.kind));
    }
    return m;
  }

  Transport* transport() const { return transport_; }

 private:
  Transport* transport_;
  uint64_t session_;
};

// Guest side of id alignment: intersects every party's digests in guest order
// and tells each host the agreed order.
data::PartyDataset AlignAsGuest(const data::PartyDataset& data,
                                Channel& channel, int num_hosts,
                                const std::string& salt) {
  std::vector<data::IdDigest> mine = data::HashIds(data.instance_ids, salt);
  if (num_hosts == 0) return data::AlignRows(data, salt, mine);
  std::vector<std::vector<data::IdDigest>> lists{mine};
  for (int h = 1; h <= num_hosts; ++h) {
    lists.push_back(
        DecodeIdList(channel.Receive(h, MessageKind::kIdDigests)).digests);
  }
  IdList order{data::IntersectDigests(lists)};
  for (int h = 1; h <= num_hosts; ++h) {
    channel.Send(h, EncodeIdAlignment(order));
  }
  return data::AlignRows(data, salt, order.digests);
}

struct NodeState {
  std::vector<uint32_t> instances;  // ascending, every aligned instance
  int64_t sampled = 0;
  std::vector<double> g;  // per output slot, over sampled instances
  std::vector<double> h;
};

struct Choice {
  bool valid = false;
  double gain = -std::numeric_limits<double>::infinity();
  int party = 0;
  uint64_t id = 0;
  int feature = -1;
  int bin = -1;
};

// Highest gain wins; candidates whose gains tie within tree::GainsTie go to
// the lowest (party, id), whatever order they were evaluated in.
Choice SelectBest(const std::vector<Choice>& candidates) {
  Choice best;
  double top = -std::numeric_limits<double>::infinity();
  for (const Choice& c : candidates) top = std::max(top, c.gain);
  for (const Choice& c : candidates) {
    if (!tree::GainsTie(c.gain, top)) continue;
    if (!best.valid ||
        std::tie(c.party, c.id) < std::tie(best.party, best.id)) {
      best = c;
    }
  }
  return best;
}

// Per-tree gradient view: l output slots per instance, multipliers applied,
// zero rows for instances outside the sample.
struct TreeGradients {
  Matrix g;
  Matrix h;
  std::vector<char> sampled;
  int64_t sampled_count = 0;
  int slots() const { return static_cast<int>(g.cols); }
};

class GuestTrainer {
 public:
  GuestTrainer(const data::PartyDataset& data, const BoostingParams& params,
               Transport* transport, int num_hosts)
      : raw_(data),
        params_(params),
        num_hosts_(num_hosts),
        rng_(params.deterministic_crypto
                 ? he::RandomSource::FromSeed(params.seed ^ 0x9e3779b97f4a7c15ULL)
                 : he::RandomSource::FromEntropy()),
        channel_(transport, std::mt19937_64(params.seed)()) {
    if (num_hosts > 0 && transport == nullptr) {
      throw ConfigError("a transport is required when hosts take part");
    }
  }

  TrainResult Run() {
    params_.Validate(num_hosts_);
    raw_.Validate();
    if (!raw_.labels) throw DataError("guest data has no label column");
    if (raw_.num_instances() == 0) throw DataError("guest data is empty");

    StartSession();
    Prepare();
    for (int epoch = 0; epoch < params_.tree_num; ++epoch) RunEpoch(epoch);
    for (int h = 1; h <= num_hosts_; ++h) channel_.Send(h, MakeShutdown());

    TrainResult result;
    result.model = std::move(model_);
    result.instance_ids = std::move(aligned_.instance_ids);
    result.train_scores = std::move(scores_);
    result.log = std::move(log_);
    return result;
  }

 private:
  // ---- session setup -----------------------------------------------------

  void StartSession() {
    if (num_hosts_ > 0) {
      keys_ = he::GenerateKeyPair(params_.key_bits, rng_);
      SessionStart start;
      start.public_key = keys_->public_key;
      start.max_bins = static_cast<uint32_t>(params_.max_bins);
      start.id_salt = params_.id_salt;
      start.num_parties = static_cast<uint16_t>(num_hosts_ + 1);
      for (int h = 1; h <= num_hosts_; ++h) channel_.Send(h, Encode(start));
    }
    aligned_ = AlignAsGuest(raw_, channel_, num_hosts_, params_.id_salt);
  }

  void Prepare() {
    labels_ = *aligned_.labels;
    n_ = labels_.size();
    int classes = data::CountClasses(labels_);
    model_.params = params_;
    model_.num_hosts = num_hosts_;
    model_.feature_names = aligned_.feature_names;
    if (classes <= 2) {
      model_.task = Task::kBinary;
      model_.num_classes = 2;
    } else {
      model_.task = Task::kMulticlass;
      model_.num_classes = classes;
    }
    binned_ = data::QuantileBin(aligned_.features, params_.max_bins);
    model_.bins = binned_.bins();
    layout_ = std::make_shared<tree::HistogramLayout>(binned_);
    scores_ = Matrix(n_, model_.output_width());
  }

  bool multiclass() const { return model_.task == Task::kMulticlass; }

  // ---- boosting ----------------------------------------------------------

  void RunEpoch(int epoch) {
    auto start = Clock::now();
    const int k = model_.output_width();
    Matrix g(n_, k), h(n_, k);
    if (multiclass()) {
      tree::SoftmaxGradHess(labels_, scores_, g, h);
    } else {
      std::vector<double> gv, hv;
      tree::LogisticGradHess(labels_, scores_.data, gv, hv);
      g.data = std::move(gv);
      h.data = std::move(hv);
    }

    std::vector<double> multiplier(n_, 1.0);
    std::vector<char> sampled(n_, 1);
    int64_t sampled_count = static_cast<int64_t>(n_);
    if (params_.goss) {
      std::vector<double> norms(n_);
      for (size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int c = 0; c < k; ++c) s += g.at(i, c) * g.at(i, c);
        norms[i] = k == 1 ? g.at(i, 0) : std::sqrt(s);
      }
      tree::GossSelection sel = tree::GossSample(
          norms, params_.top_rate, params_.other_rate, params_.seed + epoch);
      std::fill(multiplier.begin(), multiplier.end(), 0.0);
      std::fill(sampled.begin(), sampled.end(), 0);
      for (size_t j = 0; j < sel.indices.size(); ++j) {
        multiplier[sel.indices[j]] = sel.multipliers[j];
        sampled[sel.indices[j]] = 1;
      }
      sampled_count = static_cast<int64_t>(sel.indices.size());
    }

    const bool mo = params_.mode.mode == modes::Mode::kMultiOutput;
    const int trees_this_epoch = (multiclass() && !mo) ? k : 1;
    for (int t = 0; t < trees_this_epoch; ++t) {
      TreeGradients tg;
      const int slots = (multiclass() && !mo) ? 1 : k;
      tg.g = Matrix(n_, slots);
      tg.h = Matrix(n_, slots);
      tg.sampled = sampled;
      tg.sampled_count = sampled_count;
      for (size_t i = 0; i < n_; ++i) {
        if (!sampled[i]) continue;
        for (int s = 0; s < slots; ++s) {
          int c = slots == 1 ? (multiclass() && !mo ? t : 0) : s;
          tg.g.at(i, s) = g.at(i, c) * multiplier[i];
          tg.h.at(i, s) = h.at(i, c) * multiplier[i];
        }
      }
      int class_index = (multiclass() && !mo) ? t : -1;
      BuildTree(epoch, class_index, tg);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.sampled = sampled_count;
    if (multiclass()) {
      entry.loss = tree::CrossEntropyLoss(labels_, scores_);
      entry.metric = tree::Accuracy(labels_, scores_);
    } else {
      entry.loss = tree::LogisticLoss(labels_, scores_.data);
      entry.metric = HasBothClasses() ? tree::Auc(labels_, scores_.data) : 0.0;
    }
    entry.seconds = Seconds(start);
    log_.epochs.push_back(entry);
  }

  bool HasBothClasses() const {
    bool pos = false, neg = false;
    for (double y : labels_) (y > 0.5 ? pos : neg) = true;
    return pos && neg;
  }

  // ---- one tree ----------------------------------------------------------

  void BuildTree(int epoch, int class_index, const TreeGradients& tg) {
    auto start = Clock::now();
    TransportStats sent0, recv0;
    if (channel_.transport()) {
      sent0 = channel_.transport()->sent();
      recv0 = channel_.transport()->received();
    }
    he::OpCounts ops0 = he::CurrentOpCounts();

    const int tree_index = static_cast<int>(model_.trees.size());
    modes::TreePlan plan =
        modes::PlanTree(params_.mode, tree_index, num_hosts_, params_.max_depth);
    const std::vector<int> hosts = plan.Hosts();
    epoch_ = static_cast<uint32_t>(epoch);
    tree_ = static_cast<uint32_t>(tree_index);
    multi_output_ = plan.multi_output;

    if (!hosts.empty()) BroadcastGradients(tg, plan, hosts);

    // Guest-local plaintext payload: [g_0..g_{l-1}, h_0..h_{l-1}].
    const int l = tg.slots();
    tree::GhTable<double> plain(n_);
    for (size_t i = 0; i < n_; ++i) {
      if (!tg.sampled[i]) continue;
      auto& row = plain[i];
      row.resize(2 * l);
      for (int s = 0; s < l; ++s) {
        row[s] = tg.g.at(i, s);
        row[l + s] = tg.h.at(i, s);
      }
    }

    tree::Tree tree;
    tree.class_index = class_index;
    tree.owner = plan.owner;

    std::map<uint32_t, NodeState> frontier;
    {
      NodeState root;
      root.instances.resize(n_);
      for (uint32_t i = 0; i < n_; ++i) root.instances[i] = i;
      frontier.emplace(0, MakeState(std::move(root.instances), tg));
    }

    for (int depth = 0; depth < params_.max_depth && !frontier.empty();
         ++depth) {
      std::vector<uint32_t> splittable;
      for (const auto& [id, st] : frontier) {
        if (st.sampled >= params_.min_samples) splittable.push_back(id);
      }
      if (splittable.empty()) break;
      const modes::LayerSpec& spec = plan.layers[depth];
      const uint32_t layer = static_cast<uint32_t>(depth);

      for (int h : spec.hosts) {
        channel_.Send(h, Encode(SplitRequest{tree_, splittable}), epoch_, layer);
      }

      std::map<uint32_t, std::vector<Choice>> candidates;
      if (spec.guest) {
        for (uint32_t id : splittable) {
          EvaluateGuest(frontier.at(id), plain, candidates[id]);
        }
      }
      for (int h : spec.hosts) {
        SplitInfos infos = DecodeSplitInfos(
            channel_.Receive(h, MessageKind::kSplitInfos));
        EvaluateHost(h, infos, splittable, frontier, candidates);
      }

      std::map<uint32_t, Choice> chosen;
      for (const auto& [id, list] : candidates) {
        Choice c = SelectBest(list);
        if (c.valid && c.gain > params_.min_gain) chosen.emplace(id, c);
      }

      std::map<uint32_t, Bitset> assignment;
      for (int h : spec.hosts) {
        BestSplits msg{tree_, {}};
        for (const auto& [id, c] : chosen) {
          if (c.party == h) msg.choices.emplace_back(id, c.id);
        }
        channel_.Send(h, Encode(msg), epoch_, layer);
      }
      for (int h : spec.hosts) {
        Assignments reply = DecodeAssignments(
            channel_.Receive(h, MessageKind::kAssignments));
        std::set<uint32_t> expected;
        for (const auto& [id, c] : chosen) {
          if (c.party == h) expected.insert(id);
        }
        if (reply.tree != tree_ || reply.nodes.size() != expected.size()) {
          throw ProtocolError("host " + std::to_string(h) +
                              " answered with unexpected assignments");
        }
        for (auto& a : reply.nodes) {
          if (!expected.count(a.node) || a.left.size() != n_ ||
              assignment.count(a.node)) {
            throw ProtocolError("host " + std::to_string(h) +
                                " sent an invalid assignment");
          }
          assignment.emplace(a.node, std::move(a.left));
        }
      }
      for (const auto& [id, c] : chosen) {
        if (c.party != tree::kGuestParty) continue;
        Bitset bits(n_);
        for (uint32_t i : frontier.at(id).instances) {
          if (binned_.BinAt(i, c.feature) <= c.bin) bits.set(i);
        }
        assignment.emplace(id, std::move(bits));
      }

      std::map<uint32_t, NodeState> next;
      for (auto& [id, st] : frontier) {
        auto it = chosen.find(id);
        if (it == chosen.end()) {
          AddLeaf(tree, id, depth, st);
          continue;
        }
        const Choice& c = it->second;
        const Bitset& bits = assignment.at(id);
        std::vector<uint32_t> left, right;
        for (uint32_t i : st.instances) (bits.get(i) ? left : right).push_back(i);
        tree::TreeNode node;
        node.id = id;
        node.depth = depth;
        node.is_leaf = false;
        node.sample_count = st.sampled;
        node.split.owner = c.party;
        node.split.gain = c.gain;
        if (c.party == tree::kGuestParty) {
          node.split.feature = c.feature;
          node.split.bin = c.bin;
        } else {
          node.split.split_id = c.id;
        }
        tree.nodes.emplace(id, node);
        next.emplace(tree::LeftChild(id), MakeState(std::move(left), tg));
        next.emplace(tree::RightChild(id), MakeState(std::move(right), tg));
      }

      if (!chosen.empty()) {
        std::set<int> later;
        for (int d = depth + 1; d < params_.max_depth; ++d) {
          later.insert(plan.layers[d].hosts.begin(), plan.layers[d].hosts.end());
        }
        if (!later.empty()) {
          Assignments sync{tree_, {}};
          for (auto& [id, bits] : assignment) sync.nodes.push_back({id, bits});
          Message m = Encode(sync);
          for (int h : later) channel_.Send(h, m, epoch_, layer);
        }
      }
      frontier = std::move(next);
    }
    for (auto& [id, st] : frontier) {
      int depth = 0;
      for (uint32_t x = id; x > 0; x = tree::Parent(x)) ++depth;
      AddLeaf(tree, id, depth, st);
    }
    for (int h : hosts) {
      channel_.Send(h, Encode(TreeEnd{tree_}), epoch_, 0);
    }

    UpdateScores(tree, tg);

    TreeLog entry;
    entry.tree = tree_index;
    entry.epoch = epoch;
    entry.class_index = class_index;
    entry.owner = plan.owner;
    entry.leaves = tree.num_leaves();
    entry.depth = tree.depth();
    entry.capacity = hosts.empty() ? 0 : static_cast<int>(gh_.capacity);
    entry.seconds = Seconds(start);
    if (channel_.transport()) {
      entry.sent = Delta(channel_.transport()->sent(), sent0);
      entry.received = Delta(channel_.transport()->received(), recv0);
    }
    entry.ops = he::CurrentOpCounts() - ops0;
    log_.trees.push_back(entry);
    model_.trees.push_back(std::move(tree));
  }

  NodeState MakeState(std::vector<uint32_t> instances,
                      const TreeGradients& tg) const {
    NodeState st;
    const int l = tg.slots();
    st.g.assign(l, 0.0);
    st.h.assign(l, 0.0);
    for (uint32_t i : instances) {
      if (!tg.sampled[i]) continue;
      ++st.sampled;
      for (int s = 0; s < l; ++s) {
        st.g[s] += tg.g.at(i, s);
        st.h[s] += tg.h.at(i, s);
      }
    }
    st.instances = std::move(instances);
    return st;
  }

  void AddLeaf(tree::Tree& tree, uint32_t id, int depth,
               const NodeState& st) const {
    tree::TreeNode node;
    node.id = id;
    node.depth = depth;
    node.is_leaf = true;
    node.sample_count = st.sampled;
    if (st.g.size() == 1) {
      node.weight = {tree::LeafWeight(st.g[0], st.h[0], params_.lambda)};
    } else {
      node.weight = tree::MoLeafWeight(st.g, st.h, params_.lambda);
    }
    for (double& w : node.weight) w *= params_.learning_rate;
    leaf_members_[id] = st.instances;
    tree.nodes.emplace(id, std::move(node));
  }

  void UpdateScores(const tree::Tree& tree, const TreeGradients&) {
    for (const auto& [id, members] : leaf_members_) {
      const auto& w = tree.nodes.at(id).weight;
      for (uint32_t i : members) {
        if (tree.class_index >= 0) {
          scores_.at(i, tree.class_index) += w[0];
        } else {
          for (size_t c = 0; c < w.size(); ++c) scores_.at(i, c) += w[c];
        }
      }
    }
    leaf_members_.clear();
  }

  double Gain(std::span<const double> gl, std::span<const double> hl,
              const NodeState& st) const {
    if (multi_output_) {
      return tree::MoGain(gl, hl, st.g, st.h, params_.lambda);
    }
    return tree::SplitGain(gl[0], hl[0], st.g[0] - gl[0], st.h[0] - hl[0],
                           st.g[0], st.h[0], params_.lambda);
  }

  void EvaluateGuest(const NodeState& st, const tree::GhTable<double>& plain,
                     std::vector<Choice>& out) const {
    tree::PlainOps ops;
    auto hist = tree::BuildHistogram<double>(layout_, binned_, st.instances,
                                             plain, ops);
    const size_t l = st.g.size();
    for (const auto& c : tree::CumulativeCandidates(hist, ops, true)) {
      std::span<const double> v(c.left.values);
      Choice cand;
      cand.valid = true;
      cand.party = tree::kGuestParty;
      cand.feature = static_cast<int>(c.feature);
      cand.bin = c.bin;
      cand.id = static_cast<uint64_t>(c.feature) * 256 + c.bin;
      cand.gain = Gain(v.subspan(0, l), v.subspan(l, l), st);
      out.push_back(cand);
    }
  }

  void EvaluateHost(int party, const SplitInfos& infos,
                    const std::vector<uint32_t>& splittable,
                    const std::map<uint32_t, NodeState>& frontier,
                    std::map<uint32_t, std::vector<Choice>>& out) {
    if (infos.tree != tree_ || infos.nodes.size() != splittable.size()) {
      throw ProtocolError("host " + std::to_string(party) +
                          " returned split infos for the wrong nodes");
    }
    std::set<uint32_t> seen;
    for (const auto& node : infos.nodes) {
      if (!frontier.count(node.node) || !seen.insert(node.node).second ||
          std::find(splittable.begin(), splittable.end(), node.node) ==
              splittable.end()) {
        throw ProtocolError("host " + std::to_string(party) +
                            " returned split infos for an unexpected node");
      }
      const NodeState& st = frontier.at(node.node);
      std::vector<Choice>& list = out[node.node];
      for (const auto& pkg : node.packages) {
        for (auto& [id, gl, hl] : DecodePackage(pkg, st)) {
          Choice cand;
          cand.valid = true;
          cand.party = party;
          cand.id = id;
          cand.gain = Gain(gl, hl, st);
          list.push_back(cand);
        }
      }
    }
  }

  std::vector<std::tuple<uint64_t, std::vector<double>, std::vector<double>>>
  DecodePackage(const WirePackage& pkg, const NodeState& st) const {
    for (int64_t count : pkg.sample_counts) {
      if (count <= 0 || count > st.sampled) {
        throw ProtocolError("split info reports an impossible sample count");
      }
    }
    std::vector<he::BigInt> plain;
    plain.reserve(pkg.ciphers.size());
    for (const auto& c : pkg.ciphers) plain.push_back(he::Decrypt(*keys_, c));

    std::vector<std::tuple<uint64_t, std::vector<double>, std::vector<double>>>
        out;
    const int l = gh_.layout.classes;
    if (gh_.scheme == GhScheme::kPacked && l == 1) {
      if (plain.size() != 1) throw ProtocolError("malformed packed split info");
      encoding::SplitInfoPackage meta{pkg.ciphers[0], pkg.split_ids,
                                      pkg.sample_counts};
      for (const auto& e : encoding::DecompressPackage(
               plain[0], meta, gh_.state, static_cast<int>(gh_.capacity))) {
        out.emplace_back(e.split_id, std::vector<double>{e.sum.g},
                         std::vector<double>{e.sum.h});
      }
      return out;
    }
    if (pkg.split_ids.size() != 1 || plain.size() != gh_.width()) {
      throw ProtocolError("malformed split info package");
    }
    const int64_t count = pkg.sample_counts[0];
    std::vector<double> gl(l), hl(l);
    if (gh_.scheme == GhScheme::kPacked) {
      encoding::ClassSums sums =
          encoding::RecoverMulticlassSums(plain, gh_.layout, gh_.state, count);
      gl = std::move(sums.g);
      hl = std::move(sums.h);
    } else {
      for (int c = 0; c < l; ++c) {
        encoding::CheckFits(plain[2 * c], params_.key_bits - 1, "gradient");
        gl[c] = encoding::DecodeGradientField(plain[2 * c], gh_.state, count);
        hl[c] = encoding::FixedPointDecode(plain[2 * c + 1], gh_.state.precision);
      }
    }
    out.emplace_back(pkg.split_ids[0], std::move(gl), std::move(hl));
    return out;
  }

  void BroadcastGradients(const TreeGradients& tg, const modes::TreePlan& plan,
                          const std::vector<int>& hosts) {
    const he::PublicKey& pk = keys_->public_key;
    const int iota = pk.MaxPlaintextBits();
    const int l = tg.slots();

    Matrix gs(static_cast<size_t>(tg.sampled_count), l);
    Matrix hs(static_cast<size_t>(tg.sampled_count), l);
    for (size_t i = 0, r = 0; i < n_; ++i) {
      if (!tg.sampled[i]) continue;
      for (int s = 0; s < l; ++s) {
        gs.at(r, s) = tg.g.at(i, s);
        hs.at(r, s) = tg.h.at(i, s);
      }
      ++r;
    }

    EpochGh gh;
    gh.tree = tree_;
    gh.state =
        encoding::ComputeMulticlassPackState(gs, hs, params_.precision, iota);
    gh.subtraction = params_.hist_subtraction;
    gh.rows.resize(n_);
    if (params_.gh_packing) {
      gh.scheme = GhScheme::kPacked;
      gh.layout = encoding::MakeMulticlassLayout(l, iota, gh.state.gh_bits());
      bool compress = params_.cipher_compress && !plan.multi_output && l == 1;
      gh.capacity = compress ? static_cast<uint32_t>(encoding::CompressCapacity(
                                   iota, gh.state.gh_bits()))
                             : 1;
      for (size_t i = 0; i < n_; ++i) {
        if (!tg.sampled[i]) continue;
        for (const he::BigInt& v : encoding::PackGhMulticlassRow(
                 tg.g.row(i), tg.h.row(i), gh.state, gh.layout)) {
          gh.rows[i].push_back(he::Encrypt(pk, v, rng_));
        }
      }
    } else {
      gh.scheme = GhScheme::kUnpacked;
      gh.layout = {l, 1, l};
      gh.capacity = 1;
      for (size_t i = 0; i < n_; ++i) {
        if (!tg.sampled[i]) continue;
        for (int s = 0; s < l; ++s) {
          he::BigInt gi = encoding::FixedPointEncode(
              tg.g.at(i, s) + gh.state.g_offset, gh.state.precision);
          he::BigInt hi = encoding::FixedPointEncode(tg.h.at(i, s),
                                                 gh.state.precision);
          gh.rows[i].push_back(he::Encrypt(pk, gi, rng_));
          gh.rows[i].push_back(he::Encrypt(pk, hi, rng_));
        }
      }
    }
    Message m = Encode(gh);
    for (int h : hosts) channel_.Send(h, m, epoch_, 0);
    gh.rows.clear();
    gh_ = std::move(gh);
  }

  const data::PartyDataset& raw_;
  BoostingParams params_;
  int num_hosts_;
  he::RandomSource rng_;
  Channel channel_;
  std::optional<he::KeyPair> keys_;

  data::PartyDataset aligned_;
  std::vector<double> labels_;
  size_t n_ = 0;
  data::BinnedMatrix binned_;
  std::shared_ptr<const tree::HistogramLayout> layout_;
  Matrix scores_;
  GuestModel model_;
  TrainingLog log_;

  uint32_t epoch_ = 0;
  uint32_t tree_ = 0;
  bool multi_output_ = false;
  EpochGh gh_;  // metadata of the current tree's broadcast, rows dropped
  mutable std::map<uint32_t, std::vector<uint32_t>> leaf_members_;
};

}  // namespace

TrainResult RunGuestTraining(const data::PartyDataset& data,
                             const BoostingParams& params,
                             Transport* transport, int num_hosts) {
  GuestTrainer trainer(data, params, transport, num_hosts);
  return trainer.Run();
}

PredictOutput RunGuestPrediction(const data::PartyDataset& data,
                                 const GuestModel& model, Transport* transport,
                                 const std::string& id_salt) {
  data.Validate();
  if (data.num_features() != model.bins.size()) {
    throw DataError("guest data has " + std::to_string(data.num_features()) +
                    " features but the model expects " +
                    std::to_string(model.bins.size()));
  }
  const int num_hosts = model.num_hosts;
  if (num_hosts > 0 && transport == nullptr) {
    throw ConfigError("a transport is required when hosts take part");
  }
  std::random_device rd;
  Channel channel(transport, (uint64_t{rd()} << 32) | rd());
  for (int h = 1; h <= num_hosts; ++h) {
    channel.Send(h, Encode(PredictStart{id_salt}));
  }
  data::PartyDataset aligned = AlignAsGuest(data, channel, num_hosts, id_salt);
  data::BinnedMatrix binned = data::ApplyBins(aligned.features, model.bins);

  HostDecisions decisions;
  auto wanted = model.HostSplitIds();
  for (int h = 1; h <= num_hosts; ++h) {
    channel.Send(h, Encode(PredictRequest{wanted[h]}));
  }
  for (int h = 1; h <= num_hosts; ++h) {
    PredictResponse resp = DecodePredictResponse(
        channel.Receive(h, MessageKind::kPredictResponse));
    if (resp.decisions.size() != wanted[h].size()) {
      throw ProtocolError("host " + std::to_string(h) +
                          " answered a different number of splits");
    }
    for (auto& [id, bits] : resp.decisions) {
      if (bits.size() != binned.num_rows()) {
        throw ProtocolError("host decision bitset has the wrong length");
      }
      decisions.emplace(std::make_pair(h, id), std::move(bits));
    }
  }
  for (int h = 1; h <= num_hosts; ++h) channel.Send(h, MakeShutdown());

  PredictOutput out;
  out.raw = PredictRaw(model, binned, decisions);
  out.probabilities = Probabilities(model, out.raw);
  out.instance_ids = std::move(aligned.instance_ids);
  return out;
}

}  // namespace sbt::federation
