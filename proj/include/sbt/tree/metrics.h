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

#ifndef SBT_TREE_METRICS_H_
#define SBT_TREE_METRICS_H_

#include <span>

#include "sbt/common/matrix.h"

namespace sbt::tree {

// Area under the ROC curve via average ranks; ties count one half. Throws
// DataError unless both classes are present.
double Auc(std::span<const double> labels, std::span<const double> scores);

// Fraction of rows whose argmax (lowest index on ties) equals the label.
double Accuracy(std::span<const double> labels, const Matrix& scores);

}  // namespace sbt::tree

#endif  // SBT_TREE_METRICS_H_
