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

#include "sbt/modes/modes.h"

#include <set>

#include "sbt/common/error.h"

namespace sbt::modes {

Mode ParseMode(const std::string& name) {
  if (name == "default") return Mode::kDefault;
  if (name == "mix") return Mode::kMix;
  if (name == "layered") return Mode::kLayered;
  if (name == "mo") return Mode::kMultiOutput;
  throw ConfigError("unknown mode '" + name +
                    "' (expected default, mix, layered or mo)");
}

std::string ModeName(Mode mode) {
  switch (mode) {
    case Mode::kDefault: return "default";
    case Mode::kMix: return "mix";
    case Mode::kLayered: return "layered";
    case Mode::kMultiOutput: return "mo";
  }
  return "default";
}

void ModeConfig::Validate(int max_depth, int num_hosts) const {
  if (mode == Mode::kMix) {
    if (num_hosts < 1) throw ConfigError("mix mode requires at least one host");
    if (tree_per_party < 1) throw ConfigError("tree_per_party must be >= 1");
  }
  if (mode == Mode::kLayered) {
    if (guest_depth < 0 || host_depth < 0 ||
        guest_depth + host_depth != max_depth) {
      throw ConfigError("layered mode requires guest_depth + host_depth == "
                        "max_depth (" + std::to_string(guest_depth) + " + " +
                        std::to_string(host_depth) + " != " +
                        std::to_string(max_depth) + ")");
    }
  }
}

std::vector<int> TreePlan::Hosts() const {
  std::set<int> hosts;
  for (const auto& layer : layers) hosts.insert(layer.hosts.begin(), layer.hosts.end());
  return {hosts.begin(), hosts.end()};
}

int MixOwner(int tree_index, int num_parties, int tree_per_party) {
  return (tree_index / tree_per_party) % num_parties;
}

TreePlan PlanTree(const ModeConfig& config, int tree_index, int num_hosts,
                  int max_depth) {
  std::vector<int> all_hosts;
  for (int k = 1; k <= num_hosts; ++k) all_hosts.push_back(k);

  TreePlan plan;
  plan.multi_output = config.mode == Mode::kMultiOutput;
  plan.layers.assign(max_depth, LayerSpec{true, all_hosts});
  switch (config.mode) {
    case Mode::kDefault:
    case Mode::kMultiOutput:
      break;
    case Mode::kMix: {
      plan.owner = MixOwner(tree_index, num_hosts + 1, config.tree_per_party);
      for (auto& layer : plan.layers) {
        layer.guest = plan.owner == 0;
        layer.hosts = plan.owner == 0 ? std::vector<int>{}
                                      : std::vector<int>{plan.owner};
      }
      break;
    }
    case Mode::kLayered:
      for (int d = 0; d < max_depth; ++d) {
        bool host_layer = d < config.host_depth;
        plan.layers[d].guest = !host_layer;
        plan.layers[d].hosts = host_layer ? all_hosts : std::vector<int>{};
      }
      break;
  }
  return plan;
}

}  // namespace sbt::modes
