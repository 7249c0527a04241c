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

#include "sbt/tree/split_math.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace sbt::tree {
namespace {

TEST(SplitGainTest, KnownValues) {
  EXPECT_DOUBLE_EQ(SplitGain(0, 1, 0, 1, 0, 2, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(SplitGain(2, 1, -1, 1, 1, 2, 0), 2.25);
  EXPECT_NEAR(SplitGain(0.5, 1, 0.5, 1, 1, 2, 0), 0.0, 1e-15);
}

TEST(LeafWeightTest, KnownValues) {
  EXPECT_EQ(LeafWeight(0, 3, 0.1), 0.0);
  EXPECT_DOUBLE_EQ(LeafWeight(1, 1, 1), -0.5);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> d(-5, 5), hd(0, 5);
  std::vector<double> g(7), h(7);
  for (int i = 0; i < 7; ++i) {
    g[i] = d(gen);
    h[i] = hd(gen);
  }
  auto w = MoLeafWeight(g, h, 0.3);
  for (int i = 0; i < 7; ++i) EXPECT_EQ(w[i], LeafWeight(g[i], h[i], 0.3));
}

TEST(MoGainTest, ReducesToScalarGainForOneOutput) {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> d(-5, 5), hd(0, 5);
  for (int t = 0; t < 500; ++t) {
    double gl = d(gen), hl = hd(gen), gr = d(gen), hr = hd(gen);
    double g = gl + gr, h = hl + hr;
    std::vector<double> vgl{gl}, vhl{hl}, vg{g}, vh{h};
    EXPECT_NEAR(MoGain(vgl, vhl, vg, vh, 0.1), SplitGain(gl, hl, gr, hr, g, h, 0.1),
                1e-9 * (1 + std::abs(SplitGain(gl, hl, gr, hr, g, h, 0.1))));
  }
}

TEST(MoGainTest, ZeroGradientsGiveZero) {
  std::vector<double> z(3, 0.0), h(3, 1.0), h2(3, 2.0);
  EXPECT_EQ(MoGain(z, h, z, h2, 0.1), 0.0);
}

// Minimises the regularised second-order objective of one leaf numerically.
double MinimisedObjective(const std::vector<std::vector<double>>& g,
                          const std::vector<std::vector<double>>& h,
                          const std::vector<int>& rows, double lambda) {
  const size_t l = g[0].size();
  double total = 0;
  for (size_t j = 0; j < l; ++j) {
    auto f = [&](double w) {
      double v = 0.5 * lambda * w * w;
      for (int i : rows) v += g[i][j] * w + 0.5 * h[i][j] * w * w;
      return v;
    };
    double lo = -100, hi = 100;
    const double phi = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
      if (f(a) < f(b)) hi = b; else lo = a;
    }
    total += f((lo + hi) / 2);
  }
  return total;
}

TEST(MoGainTest, MatchesDirectLossReduction) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> gd(-1, 1), hd(0.05, 0.25);
  for (int t = 0; t < 50; ++t) {
    const int n = 6 + static_cast<int>(gen() % 10), l = 1 + static_cast<int>(gen() % 4);
    std::vector<std::vector<double>> g(n, std::vector<double>(l)), h = g;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < l; ++j) {
        g[i][j] = gd(gen);
        h[i][j] = hd(gen);
      }
    }
    std::vector<int> all, left, right;
    for (int i = 0; i < n; ++i) {
      all.push_back(i);
      (gen() % 2 ? left : right).push_back(i);
    }
    std::vector<double> gl(l, 0), hl(l, 0), gp(l, 0), hp(l, 0);
    for (int i : all) {
      for (int j = 0; j < l; ++j) {
        gp[j] += g[i][j];
        hp[j] += h[i][j];
      }
    }
    for (int i : left) {
      for (int j = 0; j < l; ++j) {
        gl[j] += g[i][j];
        hl[j] += h[i][j];
      }
    }
    const double lambda = 0.1;
    double reduction = MinimisedObjective(g, h, all, lambda) -
                       MinimisedObjective(g, h, left, lambda) -
                       MinimisedObjective(g, h, right, lambda);
    EXPECT_NEAR(MoGain(gl, hl, gp, hp, lambda), reduction, 1e-9);
  }
}

}  // namespace
}  // namespace sbt::tree
