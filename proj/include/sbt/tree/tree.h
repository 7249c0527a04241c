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

#ifndef SBT_TREE_TREE_H_
#define SBT_TREE_TREE_H_

#include <cstdint>
#include <map>
#include <vector>

namespace sbt::tree {

// Node ids follow heap numbering: root 0, children 2i+1 (left), 2i+2 (right).
inline uint32_t LeftChild(uint32_t id) { return 2 * id + 1; }
inline uint32_t RightChild(uint32_t id) { return 2 * id + 2; }
inline uint32_t Parent(uint32_t id) { return (id - 1) / 2; }
inline bool IsLeftChild(uint32_t id) { return id % 2 == 1; }
inline uint32_t Sibling(uint32_t id) { return IsLeftChild(id) ? id + 1 : id - 1; }

inline constexpr int kGuestParty = 0;

// Who owns a split and how to evaluate it. For splits owned by a host the
// guest only knows the anonymous split id; the feature and threshold live in
// that host's model shard.
struct SplitRef {
  int owner = kGuestParty;
  int feature = -1;        // owner-local feature index (guest splits only)
  int bin = -1;            // left branch takes bins <= bin (guest splits only)
  uint64_t split_id = 0;   // anonymous id (host splits only)
  double gain = 0.0;
};

struct TreeNode {
  uint32_t id = 0;
  int depth = 0;
  bool is_leaf = true;
  SplitRef split;               // valid when !is_leaf
  std::vector<double> weight;   // valid when is_leaf, shrinkage applied
  int64_t sample_count = 0;
};

struct Tree {
  // Class whose score this tree updates; -1 when leaves carry one weight per
  // class (multi-output) or for binary tasks.
  int class_index = -1;
  // Party that built the tree in mix mode (-1 when every party took part).
  int owner = -1;
  std::map<uint32_t, TreeNode> nodes;

  const TreeNode& root() const { return nodes.at(0); }
  int num_leaves() const;
  int depth() const;
};

}  // namespace sbt::tree

#endif  // SBT_TREE_TREE_H_
