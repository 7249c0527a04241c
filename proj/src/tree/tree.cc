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

#include "sbt/tree/tree.h"

#include <algorithm>

namespace sbt::tree {

int Tree::num_leaves() const {
  int n = 0;
  for (const auto& [id, node] : nodes) n += node.is_leaf ? 1 : 0;
  return n;
}

int Tree::depth() const {
  int d = 0;
  for (const auto& [id, node] : nodes) d = std::max(d, node.depth);
  return d;
}

}  // namespace sbt::tree
