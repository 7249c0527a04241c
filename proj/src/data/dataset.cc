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

#include "sbt/data/dataset.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

#include "sbt/common/error.h"

namespace sbt::data {
namespace {

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(Trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseValue(const std::string& raw, const std::string& where) {
  std::string s = Lower(raw);
  if (s.empty() || s == "na" || s == "nan" || s == "null") return 0.0;
  try {
    size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument(raw);
    if (std::isnan(v)) return 0.0;
    return v;
  } catch (const std::exception&) {
    throw DataError("cannot parse value '" + raw + "' at " + where);
  }
}

std::string Extension(const std::string& path) {
  size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  return Lower(path.substr(dot + 1));
}

}  // namespace

void PartyDataset::Validate() const {
  if (features.rows != instance_ids.size()) {
    throw DataError("feature rows do not match instance id count");
  }
  if (features.cols != feature_names.size()) {
    throw DataError("feature column count does not match feature names");
  }
  if (labels && labels->size() != instance_ids.size()) {
    throw DataError("label count does not match instance count");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : instance_ids) {
    if (!seen.insert(id).second) throw DataError("duplicate instance id " + id);
  }
}

PartyDataset ReadCsv(const std::string& path, bool keep_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + " is empty");
  std::vector<std::string> header = SplitCsvLine(line);
  if (header.empty()) throw DataError(path + ": empty header");

  int label_col = -1;
  std::vector<int> feature_cols;
  PartyDataset ds;
  for (size_t c = 1; c < header.size(); ++c) {
    std::string name = Lower(header[c]);
    if (label_col < 0 && (name == "y" || name == "label")) {
      label_col = static_cast<int>(c);
    } else {
      feature_cols.push_back(static_cast<int>(c));
      ds.feature_names.push_back(header[c]);
    }
  }
  if (keep_labels && label_col < 0) {
    throw DataError(path + ": guest data needs a 'y' or 'label' column");
  }

  std::vector<double> values;
  std::vector<double> labels;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    }
    std::string where = path + ":" + std::to_string(line_no);
    ds.instance_ids.push_back(cells[0]);
    if (label_col >= 0) labels.push_back(ParseValue(cells[label_col], where));
    for (int c : feature_cols) values.push_back(ParseValue(cells[c], where));
  }
  ds.features.rows = ds.instance_ids.size();
  ds.features.cols = feature_cols.size();
  ds.features.data = std::move(values);
  if (keep_labels) ds.labels = std::move(labels);
  ds.Validate();
  return ds;
}

PartyDataset ReadLibsvm(const std::string& path, bool keep_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::map<int, double>> rows;
  std::vector<double> labels;
  int min_index = std::numeric_limits<int>::max();
  int max_index = -1;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::istringstream tokens(t);
    std::string tok;
    tokens >> tok;
    std::string where = path + ":" + std::to_string(line_no);
    labels.push_back(ParseValue(tok, where));
    std::map<int, double> row;
    while (tokens >> tok) {
      size_t colon = tok.find(':');
      if (colon == std::string::npos) throw DataError(where + ": bad token " + tok);
      int idx = 0;
      auto [p, ec] =
          std::from_chars(tok.data(), tok.data() + colon, idx);
      if (ec != std::errc() || idx < 0) {
        throw DataError(where + ": bad feature index in " + tok);
      }
      row[idx] = ParseValue(tok.substr(colon + 1), where);
      min_index = std::min(min_index, idx);
      max_index = std::max(max_index, idx);
    }
    rows.push_back(std::move(row));
  }
  int base = (min_index == 0 || max_index < 0) ? 0 : 1;
  size_t cols = max_index < 0 ? 0 : static_cast<size_t>(max_index - base + 1);
  PartyDataset ds;
  ds.features = Matrix(rows.size(), cols);
  for (size_t c = 0; c < cols; ++c) {
    ds.feature_names.push_back("f" + std::to_string(c));
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    ds.instance_ids.push_back(std::to_string(i));
    for (auto [idx, v] : rows[i]) ds.features.at(i, idx - base) = v;
  }
  if (keep_labels) ds.labels = std::move(labels);
  ds.Validate();
  return ds;
}

PartyDataset ReadDataset(const std::string& path, bool keep_labels) {
  std::string ext = Extension(path);
  if (ext == "csv") return ReadCsv(path, keep_labels);
  if (ext == "libsvm" || ext == "svm" || ext == "txt") {
    return ReadLibsvm(path, keep_labels);
  }
  throw DataError("unsupported data format for " + path +
                  " (expected .csv or .libsvm)");
}

void WriteCsv(const std::string& path, const PartyDataset& ds) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << std::setprecision(17);
  out << "id";
  if (ds.labels) out << ",y";
  for (const auto& name : ds.feature_names) out << ',' << name;
  out << '\n';
  for (size_t i = 0; i < ds.num_instances(); ++i) {
    out << ds.instance_ids[i];
    if (ds.labels) out << ',' << (*ds.labels)[i];
    for (double v : ds.features.row(i)) out << ',' << v;
    out << '\n';
  }
}

int CountClasses(const std::vector<double>& labels) {
  int max_label = -1;
  for (double y : labels) {
    if (y < 0 || y != std::floor(y)) {
      throw DataError("labels must be non-negative integers");
    }
    max_label = std::max(max_label, static_cast<int>(y));
  }
  return max_label + 1;
}

}  // namespace sbt::data
