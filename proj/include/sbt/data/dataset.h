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

#ifndef SBT_DATA_DATASET_H_
#define SBT_DATA_DATASET_H_

#include <optional>
#include <string>
#include <vector>

#include "sbt/common/matrix.h"

namespace sbt::data {

enum class Role { kGuest, kHost };

// One party's slice of a vertically partitioned dataset.
//
// Missing values are stored as 0.0 and therefore take the sparse zero path
// during binning.
struct PartyDataset {
  std::vector<std::string> instance_ids;
  std::vector<std::string> feature_names;
  Matrix features;  // n x d_k
  std::optional<std::vector<double>> labels;

  size_t num_instances() const { return instance_ids.size(); }
  size_t num_features() const { return features.cols; }
  Role role() const { return labels ? Role::kGuest : Role::kHost; }

  // Throws DataError on duplicate ids or shape mismatches.
  void Validate() const;
};

// CSV with a header row. The first column is the instance id; a column named
// "y" or "label" (case-insensitive) is the label; every other column is a
// feature. Empty cells and "NA"/"nan" are treated as 0.0.
PartyDataset ReadCsv(const std::string& path, bool keep_labels);

// libsvm: "<label> <index>:<value> ...", 1-based or 0-based indices. The
// instance id is the 0-based line number.
PartyDataset ReadLibsvm(const std::string& path, bool keep_labels);

// Dispatches on the extension (.csv, .libsvm, .svm, .txt).
PartyDataset ReadDataset(const std::string& path, bool keep_labels);

void WriteCsv(const std::string& path, const PartyDataset& ds);

// Number of distinct classes assuming labels are 0..k-1.
int CountClasses(const std::vector<double>& labels);

}  // namespace sbt::data

#endif  // SBT_DATA_DATASET_H_
