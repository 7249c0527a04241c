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

#ifndef SBT_MODES_MODES_H_
#define SBT_MODES_MODES_H_

#include <string>
#include <vector>

namespace sbt::modes {

enum class Mode {
  kDefault,      // every layer federated with all hosts
  kMix,          // parties take turns building whole trees
  kLayered,      // host layers first, guest layers after
  kMultiOutput,  // one tree per epoch with per-class leaf vectors
};

Mode ParseMode(const std::string& name);  // "default" | "mix" | "layered" | "mo"
std::string ModeName(Mode mode);

struct ModeConfig {
  Mode mode = Mode::kDefault;
  int tree_per_party = 1;  // mix
  int guest_depth = 2;     // layered
  int host_depth = 3;      // layered

  // Throws ConfigError: layered needs guest_depth + host_depth == max_depth,
  // mix needs at least one host and tree_per_party >= 1.
  void Validate(int max_depth, int num_hosts) const;
};

// Which parties contribute candidates to one layer of a tree.
struct LayerSpec {
  bool guest = true;
  std::vector<int> hosts;  // party indices, 1-based

  bool federated() const { return !hosts.empty(); }
};

struct TreePlan {
  int owner = -1;  // mix mode owner party; -1 otherwise
  bool multi_output = false;
  std::vector<LayerSpec> layers;  // one per depth, size max_depth

  // Hosts taking part in any layer, ascending.
  std::vector<int> Hosts() const;
};

// Round-robin over [guest, host 1, ..., host K], tree_per_party consecutive
// trees each. Returns the owning party index.
int MixOwner(int tree_index, int num_parties, int tree_per_party);

TreePlan PlanTree(const ModeConfig& config, int tree_index, int num_hosts,
                  int max_depth);

}  // namespace sbt::modes

#endif  // SBT_MODES_MODES_H_
