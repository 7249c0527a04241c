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

#include "oracle.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "sbt/tree/goss.h"

namespace sbt::testing {
namespace {

struct Column {
  int party;
  int feature;
  int bins;
  const data::BinnedMatrix* source;
};

double Score(const std::vector<double>& g, const std::vector<double>& h,
             double lambda) {
  double s = 0;
  for (size_t c = 0; c < g.size(); ++c) s += g[c] * g[c] / (h[c] + lambda);
  return s;
}

}  // namespace

OracleModel TrainOracle(const std::vector<const data::BinnedMatrix*>& parties,
                        const std::vector<double>& labels, int num_classes,
                        const OracleParams& p) {
  const size_t n = labels.size();
  const int width = num_classes > 2 ? num_classes : 1;
  std::vector<Column> columns;
  for (size_t q = 0; q < parties.size(); ++q) {
    for (size_t f = 0; f < parties[q]->num_features(); ++f) {
      columns.push_back({static_cast<int>(q), static_cast<int>(f),
                         parties[q]->bins(f).num_bins(), parties[q]});
    }
  }

  OracleModel model;
  model.scores = Matrix(n, width);
  for (int epoch = 0; epoch < p.tree_num; ++epoch) {
    Matrix g(n, width), h(n, width);
    for (size_t i = 0; i < n; ++i) {
      if (width == 1) {
        double prob = 1.0 / (1.0 + std::exp(-model.scores.at(i, 0)));
        g.at(i, 0) = prob - labels[i];
        h.at(i, 0) = prob * (1 - prob);
      } else {
        double mx = -std::numeric_limits<double>::infinity();
        for (int c = 0; c < width; ++c) mx = std::max(mx, model.scores.at(i, c));
        double z = 0;
        std::vector<double> e(width);
        for (int c = 0; c < width; ++c) z += e[c] = std::exp(model.scores.at(i, c) - mx);
        for (int c = 0; c < width; ++c) {
          double prob = e[c] / z;
          g.at(i, c) = prob - (labels[i] == c ? 1.0 : 0.0);
          h.at(i, c) = prob * (1 - prob);
        }
      }
    }
    std::vector<double> mult(n, 1.0);
    if (p.goss) {
      std::vector<double> norms(n);
      for (size_t i = 0; i < n; ++i) {
        double s = 0;
        for (int c = 0; c < width; ++c) s += g.at(i, c) * g.at(i, c);
        norms[i] = width == 1 ? g.at(i, 0) : std::sqrt(s);
      }
      auto sel = tree::GossSample(norms, p.top_rate, p.other_rate, p.seed + epoch);
      std::fill(mult.begin(), mult.end(), 0.0);
      for (size_t j = 0; j < sel.indices.size(); ++j) {
        mult[sel.indices[j]] = sel.multipliers[j];
      }
    }

    const int trees = (width > 1 && !p.multi_output) ? width : 1;
    for (int t = 0; t < trees; ++t) {
      const int slots = (width > 1 && !p.multi_output) ? 1 : width;
      auto gi = [&](size_t i, int s) {
        int c = slots == 1 && width > 1 ? t : s;
        return g.at(i, c) * mult[i];
      };
      auto hi = [&](size_t i, int s) {
        int c = slots == 1 && width > 1 ? t : s;
        return h.at(i, c) * mult[i];
      };
      OracleTree tree;
      tree.class_index = (width > 1 && !p.multi_output) ? t : -1;

      std::map<uint32_t, std::vector<uint32_t>> frontier;
      std::vector<uint32_t> all(n);
      for (uint32_t i = 0; i < n; ++i) all[i] = i;
      frontier[0] = all;
      std::map<uint32_t, std::vector<uint32_t>> leaves;

      for (int depth = 0; depth <= p.max_depth && !frontier.empty(); ++depth) {
        std::map<uint32_t, std::vector<uint32_t>> next;
        for (auto& [id, members] : frontier) {
          std::vector<double> G(slots, 0.0), H(slots, 0.0);
          int64_t sampled = 0;
          for (uint32_t i : members) {
            if (mult[i] == 0.0) continue;
            ++sampled;
            for (int s = 0; s < slots; ++s) {
              G[s] += gi(i, s);
              H[s] += hi(i, s);
            }
          }
          bool split = false;
          struct Cand {
            double gain;
            int party, feature, bin;
          };
          std::vector<Cand> cands;
          if (depth < p.max_depth && sampled >= p.min_samples) {
            for (const Column& col : columns) {
              std::vector<std::vector<double>> hg(col.bins, std::vector<double>(slots)),
                  hh(col.bins, std::vector<double>(slots));
              std::vector<int64_t> cnt(col.bins, 0);
              for (uint32_t i : members) {
                if (mult[i] == 0.0) continue;
                int b = col.source->BinAt(i, col.feature);
                ++cnt[b];
                for (int s = 0; s < slots; ++s) {
                  hg[b][s] += gi(i, s);
                  hh[b][s] += hi(i, s);
                }
              }
              std::vector<double> gl(slots, 0.0), hl(slots, 0.0);
              int64_t cl = 0, prev = -1;
              for (int b = 0; b + 1 < col.bins; ++b) {
                for (int s = 0; s < slots; ++s) {
                  gl[s] += hg[b][s];
                  hl[s] += hh[b][s];
                }
                cl += cnt[b];
                bool degenerate = cl == 0 || cl == sampled || cl == prev;
                prev = cl;
                if (degenerate) continue;
                std::vector<double> gr(slots), hr(slots);
                for (int s = 0; s < slots; ++s) {
                  gr[s] = G[s] - gl[s];
                  hr[s] = H[s] - hl[s];
                }
                double gain = 0.5 * (Score(gl, hl, p.lambda) +
                                     Score(gr, hr, p.lambda) -
                                     Score(G, H, p.lambda));
                cands.push_back({gain, col.party, col.feature, b});
              }
            }
          }
          OracleNode best;
          if (!cands.empty()) {
            double top = -std::numeric_limits<double>::infinity();
            for (const Cand& c : cands) top = std::max(top, c.gain);
            // Near-equal gains go to the first candidate in (party, feature,
            // bin) order, which is the order they were generated in.
            for (const Cand& c : cands) {
              if (top - c.gain <= 1e-9 * std::abs(top) + 1e-12) {
                best.leaf = false;
                best.party = c.party;
                best.feature = c.feature;
                best.bin = c.bin;
                split = c.gain > p.min_gain;
                break;
              }
            }
          }
          if (!split) {
            OracleNode leaf;
            for (int s = 0; s < slots; ++s) {
              leaf.weight.push_back(-G[s] / (H[s] + p.lambda) * p.learning_rate);
            }
            tree.nodes[id] = leaf;
            leaves[id] = members;
            continue;
          }
          tree.nodes[id] = best;
          const data::BinnedMatrix* src = parties[best.party];
          for (uint32_t i : members) {
            bool left = src->BinAt(i, best.feature) <= best.bin;
            next[left ? 2 * id + 1 : 2 * id + 2].push_back(i);
          }
          next.try_emplace(2 * id + 1);
          next.try_emplace(2 * id + 2);
        }
        frontier = std::move(next);
      }
      for (auto& [id, members] : leaves) {
        const auto& w = tree.nodes[id].weight;
        for (uint32_t i : members) {
          if (tree.class_index >= 0) {
            model.scores.at(i, tree.class_index) += w[0];
          } else {
            for (size_t c = 0; c < w.size(); ++c) model.scores.at(i, c) += w[c];
          }
        }
      }
      model.trees.push_back(std::move(tree));
    }
  }
  return model;
}

OracleParams OracleParamsFrom(const federation::BoostingParams& params) {
  OracleParams p;
  p.tree_num = params.tree_num;
  p.max_depth = params.max_depth;
  p.learning_rate = params.learning_rate;
  p.lambda = params.lambda;
  p.min_gain = params.min_gain;
  p.min_samples = params.min_samples;
  p.goss = params.goss;
  p.top_rate = params.top_rate;
  p.other_rate = params.other_rate;
  p.seed = params.seed;
  p.multi_output = params.mode.mode == modes::Mode::kMultiOutput;
  return p;
}

std::string CompareWithOracle(const federation::GuestModel& guest,
                              const std::vector<federation::HostModel>& hosts,
                              const OracleModel& oracle, double weight_tol) {
  std::ostringstream why;
  if (guest.trees.size() != oracle.trees.size()) {
    why << "tree count " << guest.trees.size() << " vs oracle "
        << oracle.trees.size();
    return why.str();
  }
  for (size_t t = 0; t < guest.trees.size(); ++t) {
    const tree::Tree& fed = guest.trees[t];
    const OracleTree& ref = oracle.trees[t];
    if (fed.class_index != ref.class_index) {
      why << "tree " << t << ": class " << fed.class_index << " vs "
          << ref.class_index;
      return why.str();
    }
    if (fed.nodes.size() != ref.nodes.size()) {
      why << "tree " << t << ": " << fed.nodes.size() << " nodes vs "
          << ref.nodes.size();
      return why.str();
    }
    for (const auto& [id, node] : fed.nodes) {
      auto it = ref.nodes.find(id);
      if (it == ref.nodes.end()) {
        why << "tree " << t << ": node " << id << " missing in oracle";
        return why.str();
      }
      const OracleNode& o = it->second;
      why << "tree " << t << " node " << id << ": ";
      if (node.is_leaf != o.leaf) {
        why << "leaf mismatch";
        return why.str();
      }
      if (node.is_leaf) {
        if (node.weight.size() != o.weight.size()) {
          why << "weight width";
          return why.str();
        }
        for (size_t c = 0; c < o.weight.size(); ++c) {
          if (std::abs(node.weight[c] - o.weight[c]) >
              weight_tol * std::max(std::abs(node.weight[c]), std::abs(o.weight[c]))) {
            why << "weight " << node.weight[c] << " vs " << o.weight[c];
            return why.str();
          }
        }
      } else {
        int feature = node.split.feature, bin = node.split.bin;
        if (node.split.owner != tree::kGuestParty) {
          const auto& splits = hosts.at(node.split.owner - 1).splits;
          auto s = splits.find(node.split.split_id);
          if (s == splits.end()) {
            why << "host split id unknown to host " << node.split.owner;
            return why.str();
          }
          feature = static_cast<int>(s->second.feature);
          bin = s->second.bin;
        }
        if (node.split.owner != o.party || feature != o.feature || bin != o.bin) {
          why << "split (" << node.split.owner << "," << feature << "," << bin
              << ") vs oracle (" << o.party << "," << o.feature << "," << o.bin
              << ")";
          return why.str();
        }
      }
      why.str("");
    }
  }
  return "";
}

}  // namespace sbt::testing
