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

#ifndef SBT_DATA_SYNTHETIC_H_
#define SBT_DATA_SYNTHETIC_H_

#include <cstdint>

#include "sbt/data/dataset.h"

namespace sbt::data {

// Binary task: Gaussian features, label drawn from a logistic model whose
// signal is spread over every feature (with a few interactions), so that any
// vertical split leaves informative columns on each side.
PartyDataset MakeSyntheticBinary(size_t n, size_t d, uint64_t seed);

// k-class task: label is the argmax of k random projections plus noise.
PartyDataset MakeSyntheticMulticlass(size_t n, size_t d, int k, uint64_t seed);

// Like MakeSyntheticBinary with a fraction of entries zeroed out.
PartyDataset MakeSyntheticSparseBinary(size_t n, size_t d, double zero_rate,
                                       uint64_t seed);

}  // namespace sbt::data

#endif  // SBT_DATA_SYNTHETIC_H_
