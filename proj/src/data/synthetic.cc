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

#include "sbt/data/synthetic.h"

#include <cmath>
#include <random>
#include <string>

namespace sbt::data {
namespace {

PartyDataset Skeleton(size_t n, size_t d) {
  PartyDataset ds;
  ds.features = Matrix(n, d);
  for (size_t i = 0; i < n; ++i) ds.instance_ids.push_back("id" + std::to_string(i));
  for (size_t j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  ds.labels.emplace(n);
  return ds;
}

}  // namespace

PartyDataset MakeSyntheticBinary(size_t n, size_t d, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PartyDataset ds = Skeleton(n, d);
  std::vector<double> w(d);
  for (size_t j = 0; j < d; ++j) w[j] = (j % 2 == 0 ? 1.0 : -1.0) * (0.4 + unif(rng));
  for (size_t i = 0; i < n; ++i) {
    double z = 0;
    for (size_t j = 0; j < d; ++j) {
      double x = normal(rng);
      ds.features.at(i, j) = x;
      z += w[j] * x;
    }
    if (d >= 2) z += 1.5 * ds.features.at(i, 0) * ds.features.at(i, d - 1);
    if (d >= 4) z -= 1.0 * std::abs(ds.features.at(i, 1) - ds.features.at(i, d / 2));
    double p = 1.0 / (1.0 + std::exp(-z));
    (*ds.labels)[i] = unif(rng) < p ? 1.0 : 0.0;
  }
  return ds;
}

PartyDataset MakeSyntheticMulticlass(size_t n, size_t d, int k, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PartyDataset ds = Skeleton(n, d);
  Matrix proj(static_cast<size_t>(k), d);
  for (double& v : proj.data) v = normal(rng);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < d; ++j) ds.features.at(i, j) = normal(rng);
    int best = 0;
    double best_score = -1e300;
    for (int c = 0; c < k; ++c) {
      double s = 0.5 * normal(rng);
      for (size_t j = 0; j < d; ++j) s += proj.at(c, j) * ds.features.at(i, j);
      if (s > best_score) {
        best_score = s;
        best = c;
      }
    }
    (*ds.labels)[i] = best;
  }
  return ds;
}

PartyDataset MakeSyntheticSparseBinary(size_t n, size_t d, double zero_rate,
                                       uint64_t seed) {
  PartyDataset ds = MakeSyntheticBinary(n, d, seed);
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double& v : ds.features.data) {
    if (unif(rng) < zero_rate) v = 0.0;
  }
  return ds;
}

}  // namespace sbt::data
