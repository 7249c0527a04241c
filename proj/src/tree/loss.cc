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

#include "sbt/tree/loss.h"

#include <algorithm>
#include <cmath>

#include "sbt/common/error.h"

namespace sbt::tree {

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

void LogisticGradHess(std::span<const double> labels,
                      std::span<const double> scores, std::vector<double>& g,
                      std::vector<double>& h) {
  if (labels.size() != scores.size()) throw DataError("label/score mismatch");
  g.resize(labels.size());
  h.resize(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) {
    double p = Sigmoid(scores[i]);
    g[i] = p - labels[i];
    h[i] = p * (1.0 - p);
  }
}

double LogisticLoss(std::span<const double> labels,
                    std::span<const double> scores) {
  double total = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    // log(1 + e^s) - y s, computed stably.
    double s = scores[i];
    double softplus = s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    total += softplus - labels[i] * s;
  }
  return labels.empty() ? 0.0 : total / static_cast<double>(labels.size());
}

void Softmax(std::span<const double> scores, std::span<double> out) {
  double m = *std::max_element(scores.begin(), scores.end());
  double z = 0;
  for (size_t c = 0; c < scores.size(); ++c) {
    out[c] = std::exp(scores[c] - m);
    z += out[c];
  }
  for (double& v : out) v /= z;
}

void SoftmaxGradHess(std::span<const double> labels, const Matrix& scores,
                     Matrix& g, Matrix& h) {
  if (labels.size() != scores.rows) throw DataError("label/score mismatch");
  g = Matrix(scores.rows, scores.cols);
  h = Matrix(scores.rows, scores.cols);
  std::vector<double> p(scores.cols);
  for (size_t i = 0; i < scores.rows; ++i) {
    Softmax(scores.row(i), p);
    const size_t y = static_cast<size_t>(labels[i]);
    for (size_t c = 0; c < scores.cols; ++c) {
      g.at(i, c) = p[c] - (c == y ? 1.0 : 0.0);
      h.at(i, c) = p[c] * (1.0 - p[c]);
    }
  }
}

double CrossEntropyLoss(std::span<const double> labels, const Matrix& scores) {
  double total = 0;
  std::vector<double> p(scores.cols);
  for (size_t i = 0; i < scores.rows; ++i) {
    Softmax(scores.row(i), p);
    total -= std::log(std::max(p[static_cast<size_t>(labels[i])], 1e-300));
  }
  return scores.rows == 0 ? 0.0 : total / static_cast<double>(scores.rows);
}

}  // namespace sbt::tree
