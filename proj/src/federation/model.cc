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

#include "sbt/federation/model.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sbt/common/error.h"
#include "sbt/tree/loss.h"

namespace sbt::federation {
namespace {

using nlohmann::json;

constexpr const char* kGuestFormat = "sbtplus-guest-model";
constexpr const char* kHostFormat = "sbtplus-host-model";
constexpr int kFormatVersion = 1;

json BinsToJson(const std::vector<data::FeatureBins>& bins) {
  json out = json::array();
  for (const auto& b : bins) {
    out.push_back({{"edges", b.edges}, {"zero_bin", b.zero_bin}});
  }
  return out;
}

std::vector<data::FeatureBins> BinsFromJson(const json& j) {
  std::vector<data::FeatureBins> out;
  for (const auto& e : j) {
    data::FeatureBins b;
    b.edges = e.at("edges").get<std::vector<double>>();
    b.zero_bin = e.at("zero_bin").get<int>();
    if (b.zero_bin < 0 || b.zero_bin >= b.num_bins()) {
      throw ConfigError("model bin table has an invalid zero bin");
    }
    out.push_back(std::move(b));
  }
  return out;
}

json ParamsToJson(const BoostingParams& p) {
  return {
      {"tree_num", p.tree_num},
      {"max_depth", p.max_depth},
      {"learning_rate", p.learning_rate},
      {"max_bins", p.max_bins},
      {"lambda", p.lambda},
      {"min_gain", p.min_gain},
      {"min_samples", p.min_samples},
      {"precision", p.precision},
      {"key_bits", p.key_bits},
      {"goss", p.goss},
      {"top_rate", p.top_rate},
      {"other_rate", p.other_rate},
      {"gh_packing", p.gh_packing},
      {"hist_subtraction", p.hist_subtraction},
      {"cipher_compress", p.cipher_compress},
      {"mode", modes::ModeName(p.mode.mode)},
      {"tree_per_party", p.mode.tree_per_party},
      {"guest_depth", p.mode.guest_depth},
      {"host_depth", p.mode.host_depth},
      {"seed", p.seed},
  };
}

BoostingParams ParamsFromJson(const json& j) {
  BoostingParams p;
  p.tree_num = j.at("tree_num");
  p.max_depth = j.at("max_depth");
  p.learning_rate = j.at("learning_rate");
  p.max_bins = j.at("max_bins");
  p.lambda = j.at("lambda");
  p.min_gain = j.at("min_gain");
  p.min_samples = j.at("min_samples");
  p.precision = j.at("precision");
  p.key_bits = j.at("key_bits");
  p.goss = j.at("goss");
  p.top_rate = j.at("top_rate");
  p.other_rate = j.at("other_rate");
  p.gh_packing = j.at("gh_packing");
  p.hist_subtraction = j.at("hist_subtraction");
  p.cipher_compress = j.at("cipher_compress");
  p.mode.mode = modes::ParseMode(j.at("mode").get<std::string>());
  p.mode.tree_per_party = j.at("tree_per_party");
  p.mode.guest_depth = j.at("guest_depth");
  p.mode.host_depth = j.at("host_depth");
  p.seed = j.at("seed");
  return p;
}

json TreeToJson(const tree::Tree& t, const GuestModel& m) {
  json nodes = json::array();
  for (const auto& [id, n] : t.nodes) {
    json node = {{"id", n.id}, {"depth", n.depth}, {"samples", n.sample_count}};
    if (n.is_leaf) {
      node["leaf"] = true;
      node["weight"] = n.weight;
    } else {
      node["leaf"] = false;
      node["owner"] = n.split.owner;
      node["gain"] = n.split.gain;
      if (n.split.owner == tree::kGuestParty) {
        node["feature"] = n.split.feature;
        node["bin"] = n.split.bin;
        const auto& edges = m.bins.at(n.split.feature).edges;
        if (n.split.bin < static_cast<int>(edges.size())) {
          node["threshold"] = edges[n.split.bin];
        }
      } else {
        node["split_id"] = n.split.split_id;
      }
    }
    nodes.push_back(std::move(node));
  }
  return {{"class_index", t.class_index}, {"owner", t.owner}, {"nodes", nodes}};
}

tree::Tree TreeFromJson(const json& j) {
  tree::Tree t;
  t.class_index = j.at("class_index");
  t.owner = j.at("owner");
  for (const auto& node : j.at("nodes")) {
    tree::TreeNode n;
    n.id = node.at("id");
    n.depth = node.at("depth");
    n.sample_count = node.at("samples");
    n.is_leaf = node.at("leaf");
    if (n.is_leaf) {
      n.weight = node.at("weight").get<std::vector<double>>();
    } else {
      n.split.owner = node.at("owner");
      n.split.gain = node.at("gain");
      if (n.split.owner == tree::kGuestParty) {
        n.split.feature = node.at("feature");
        n.split.bin = node.at("bin");
      } else {
        n.split.split_id = node.at("split_id");
      }
    }
    t.nodes.emplace(n.id, std::move(n));
  }
  return t;
}

void ValidateTree(const tree::Tree& t, const GuestModel& m) {
  if (!t.nodes.count(0)) throw ConfigError("model tree has no root");
  for (const auto& [id, n] : t.nodes) {
    if (n.is_leaf) {
      size_t expect = t.class_index < 0 ? static_cast<size_t>(m.output_width())
                                        : 1;
      if (n.weight.size() != expect) {
        throw ConfigError("leaf weight width does not match the task");
      }
      continue;
    }
    if (!t.nodes.count(tree::LeftChild(id)) ||
        !t.nodes.count(tree::RightChild(id))) {
      throw ConfigError("internal node without both children");
    }
    if (n.split.owner == tree::kGuestParty &&
        (n.split.feature < 0 ||
         n.split.feature >= static_cast<int>(m.bins.size()))) {
      throw ConfigError("guest split references an unknown feature");
    }
    if (n.split.owner < 0 || n.split.owner > m.num_hosts) {
      throw ConfigError("split owner out of range");
    }
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write model file " + path);
  out << text;
}

json ParseJson(const std::string& text, const char* format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid model file: ") + e.what());
  }
  if (j.value("format", "") != format) {
    throw ConfigError(std::string("not a ") + format + " document");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw ConfigError("unsupported model version");
  }
  return j;
}

template <typename F>
auto Guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
}

}  // namespace

std::string TaskName(Task task) {
  return task == Task::kBinary ? "binary" : "multiclass";
}

std::map<int, std::vector<uint64_t>> GuestModel::HostSplitIds() const {
  std::map<int, std::vector<uint64_t>> out;
  for (const auto& t : trees) {
    for (const auto& [id, n] : t.nodes) {
      if (!n.is_leaf && n.split.owner != tree::kGuestParty) {
        out[n.split.owner].push_back(n.split.split_id);
      }
    }
  }
  for (auto& [party, ids] : out) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return out;
}

Bitset HostDecide(const HostModel& model, const data::BinnedMatrix& binned,
                  uint64_t split_id) {
  auto it = model.splits.find(split_id);
  if (it == model.splits.end()) {
    throw ProtocolError("unknown split id requested from host " +
                        std::to_string(model.party));
  }
  Bitset out(binned.num_rows());
  for (size_t i = 0; i < binned.num_rows(); ++i) {
    out.set(i, binned.BinAt(i, it->second.feature) <= it->second.bin);
  }
  return out;
}

Matrix PredictRaw(const GuestModel& model, const data::BinnedMatrix& binned,
                  const HostDecisions& decisions) {
  const size_t n = binned.num_rows();
  const int width = model.output_width();
  Matrix out(n, width);
  for (const auto& t : model.trees) {
    for (size_t i = 0; i < n; ++i) {
      uint32_t id = 0;
      while (true) {
        const tree::TreeNode& node = t.nodes.at(id);
        if (node.is_leaf) {
          if (t.class_index >= 0) {
            out.at(i, t.class_index) += node.weight[0];
          } else {
            for (int c = 0; c < width; ++c) out.at(i, c) += node.weight[c];
          }
          break;
        }
        bool left;
        if (node.split.owner == tree::kGuestParty) {
          left = binned.BinAt(i, node.split.feature) <= node.split.bin;
        } else {
          auto it = decisions.find({node.split.owner, node.split.split_id});
          if (it == decisions.end() || it->second.size() != n) {
            throw ProtocolError("missing host decision for a split of party " +
                                std::to_string(node.split.owner));
          }
          left = it->second.get(i);
        }
        id = left ? tree::LeftChild(id) : tree::RightChild(id);
      }
    }
  }
  return out;
}

Matrix Probabilities(const GuestModel& model, const Matrix& raw) {
  Matrix out(raw.rows, raw.cols);
  for (size_t i = 0; i < raw.rows; ++i) {
    if (model.task == Task::kBinary) {
      out.at(i, 0) = tree::Sigmoid(raw.at(i, 0));
    } else {
      tree::Softmax(raw.row(i), out.row(i));
    }
  }
  return out;
}

std::string SerializeGuestModel(const GuestModel& model) {
  json trees = json::array();
  for (const auto& t : model.trees) trees.push_back(TreeToJson(t, model));
  json j = {
      {"format", kGuestFormat},
      {"version", kFormatVersion},
      {"task", TaskName(model.task)},
      {"num_classes", model.num_classes},
      {"num_hosts", model.num_hosts},
      {"config", ParamsToJson(model.params)},
      {"feature_names", model.feature_names},
      {"bins", BinsToJson(model.bins)},
      {"trees", trees},
  };
  return j.dump(1) + "\n";
}

GuestModel ParseGuestModel(const std::string& text) {
  json j = ParseJson(text, kGuestFormat);
  GuestModel m = Guarded([&] {
    GuestModel m;
    std::string task = j.at("task");
    if (task == "binary") {
      m.task = Task::kBinary;
    } else if (task == "multiclass") {
      m.task = Task::kMulticlass;
    } else {
      throw ConfigError("unknown task '" + task + "'");
    }
    m.num_classes = j.at("num_classes");
    m.num_hosts = j.at("num_hosts");
    m.params = ParamsFromJson(j.at("config"));
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.bins = BinsFromJson(j.at("bins"));
    for (const auto& t : j.at("trees")) m.trees.push_back(TreeFromJson(t));
    return m;
  });
  if (m.num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (m.bins.size() != m.feature_names.size()) {
    throw ConfigError("bin table and feature names differ in length");
  }
  for (const auto& t : m.trees) ValidateTree(t, m);
  return m;
}

std::string SerializeHostModel(const HostModel& model) {
  json splits = json::array();
  for (const auto& [id, s] : model.splits) {
    splits.push_back({{"id", id}, {"feature", s.feature}, {"bin", s.bin}});
  }
  json j = {
      {"format", kHostFormat},
      {"version", kFormatVersion},
      {"party", model.party},
      {"feature_names", model.feature_names},
      {"bins", BinsToJson(model.bins)},
      {"splits", splits},
  };
  return j.dump(1) + "\n";
}

HostModel ParseHostModel(const std::string& text) {
  json j = ParseJson(text, kHostFormat);
  HostModel m = Guarded([&] {
    HostModel m;
    m.party = j.at("party");
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.bins = BinsFromJson(j.at("bins"));
    for (const auto& s : j.at("splits")) {
      HostSplit split{s.at("feature").get<uint32_t>(), s.at("bin").get<int>()};
      m.splits.emplace(s.at("id").get<uint64_t>(), split);
    }
    return m;
  });
  if (m.party < 1) throw ConfigError("host party index must be >= 1");
  for (const auto& [id, s] : m.splits) {
    if (s.feature >= m.bins.size()) {
      throw ConfigError("host split references an unknown feature");
    }
  }
  return m;
}

void SaveGuestModel(const std::string& path, const GuestModel& model) {
  WriteFile(path, SerializeGuestModel(model));
}

GuestModel LoadGuestModel(const std::string& path) {
  return ParseGuestModel(ReadFile(path));
}

void SaveHostModel(const std::string& path, const HostModel& model) {
  WriteFile(path, SerializeHostModel(model));
}

HostModel LoadHostModel(const std::string& path) {
  return ParseHostModel(ReadFile(path));
}

}  // namespace sbt::federation
