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

#ifndef SBT_TREE_LOSS_H_
#define SBT_TREE_LOSS_H_

#include <span>
#include <vector>

#include "sbt/common/matrix.h"

namespace sbt::tree {

double Sigmoid(double x);

// Binary logistic loss on raw margins: p = sigmoid(score), g = p - y,
// h = p (1 - p).
void LogisticGradHess(std::span<const double> labels,
                      std::span<const double> scores, std::vector<double>& g,
                      std::vector<double>& h);

double LogisticLoss(std::span<const double> labels,
                    std::span<const double> scores);

// Softmax cross-entropy. scores is n x k, labels hold class indices.
// g_c = p_c - y_c and h_c = p_c (1 - p_c), the diagonal of the hessian.
void SoftmaxGradHess(std::span<const double> labels, const Matrix& scores,
                     Matrix& g, Matrix& h);

double CrossEntropyLoss(std::span<const double> labels, const Matrix& scores);

void Softmax(std::span<const double> scores, std::span<double> out);

}  // namespace sbt::tree

#endif  // SBT_TREE_LOSS_H_
