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

#ifndef SBT_TREE_SPLIT_MATH_H_
#define SBT_TREE_SPLIT_MATH_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace sbt::tree {

inline constexpr double kDefaultLambda = 0.1;
inline constexpr double kDefaultMinGain = 1e-4;
inline constexpr int kDefaultMinSamples = 2;

// Gains this close are treated as equal when choosing a split, so that
// fixed-point round-off never decides between equally good candidates.
inline constexpr double kGainTieTolerance = 1e-9;

inline bool GainsTie(double a, double b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= kGainTieTolerance * scale + 1e-12;
}

// 1/2 [ gl^2/(hl+l) + gr^2/(hr+l) - g^2/(h+l) ]
double SplitGain(double g_left, double h_left, double g_right, double h_right,
                 double g, double h, double lambda);

// -g / (h + lambda)
double LeafWeight(double g_sum, double h_sum, double lambda);

std::vector<double> MoLeafWeight(std::span<const double> g_sum,
                                 std::span<const double> h_sum, double lambda);

// -1/2 sum_j (sum g_j)^2 / (sum h_j + lambda)
double MoScore(std::span<const double> g_sum, std::span<const double> h_sum,
               double lambda);

// Score(parent) - (Score(left) + Score(right)). Right aggregates are
// parent minus left.
double MoGain(std::span<const double> g_left, std::span<const double> h_left,
              std::span<const double> g_parent,
              std::span<const double> h_parent, double lambda);

}  // namespace sbt::tree

#endif  // SBT_TREE_SPLIT_MATH_H_
