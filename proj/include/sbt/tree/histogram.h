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

#ifndef SBT_TREE_HISTOGRAM_H_
#define SBT_TREE_HISTOGRAM_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sbt/common/error.h"
#include "sbt/data/binning.h"
#include "sbt/he/paillier.h"

namespace sbt::tree {

// Per-feature bin counts and offsets into the flat cell array.
class HistogramLayout {
 public:
  explicit HistogramLayout(const data::BinnedMatrix& binned);

  size_t num_features() const { return num_bins_.size(); }
  int num_bins(size_t feature) const { return num_bins_[feature]; }
  size_t offset(size_t feature) const { return offsets_[feature]; }
  size_t num_cells() const { return offsets_.back(); }
  int zero_bin(size_t feature) const { return zero_bins_[feature]; }

 private:
  std::vector<int> num_bins_;
  std::vector<int> zero_bins_;
  std::vector<size_t> offsets_;
};

// An accumulator: one or more values (g/h slots, packed ciphertexts, ...)
// plus the number of instances summed into it. An empty value vector stands
// for the zero element, so ciphertext cells need no encryption of zero.
template <typename T>
struct Cell {
  std::vector<T> values;
  int64_t count = 0;

  bool empty() const { return values.empty(); }
};

// Element-wise operations over plaintext doubles.
struct PlainOps {
  using Value = double;
  void AddInto(std::vector<double>& acc, std::span<const double> x) const {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
  }
  void SubInto(std::vector<double>& acc, std::span<const double> x) const {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] -= x[i];
  }
  std::vector<double> Negated(std::span<const double> x) const {
    std::vector<double> out(x.begin(), x.end());
    for (double& v : out) v = -v;
    return out;
  }
};

// Element-wise homomorphic operations. Subtraction adds the additive inverse
// modulo n; callers guarantee the true difference of every packed field is
// non-negative so no borrow crosses field boundaries.
struct CipherOps {
  using Value = he::Ciphertext;
  const he::PublicKey* pk = nullptr;

  void AddInto(std::vector<he::Ciphertext>& acc,
               std::span<const he::Ciphertext> x) const {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] = he::Add(*pk, acc[i], x[i]);
  }
  void SubInto(std::vector<he::Ciphertext>& acc,
               std::span<const he::Ciphertext> x) const {
    for (size_t i = 0; i < acc.size(); ++i) {
      acc[i] = he::Subtract(*pk, acc[i], x[i]);
    }
  }
  std::vector<he::Ciphertext> Negated(std::span<const he::Ciphertext> x) const {
    std::vector<he::Ciphertext> out;
    for (const auto& c : x) out.push_back(he::Negate(*pk, c));
    return out;
  }
};

template <typename T, typename Ops>
void Accumulate(Cell<T>& acc, std::span<const T> x, int64_t count,
                const Ops& ops) {
  if (x.empty()) return;
  if (acc.empty()) {
    acc.values.assign(x.begin(), x.end());
  } else {
    if (acc.values.size() != x.size()) throw ProtocolError("cell width mismatch");
    ops.AddInto(acc.values, x);
  }
  acc.count += count;
}

template <typename T, typename Ops>
void Accumulate(Cell<T>& acc, const Cell<T>& x, const Ops& ops) {
  Accumulate<T, Ops>(acc, std::span<const T>(x.values), x.count, ops);
}

// acc -= x. A resulting count of zero yields the empty cell.
template <typename T, typename Ops>
void Remove(Cell<T>& acc, const Cell<T>& x, const Ops& ops) {
  if (x.empty()) return;
  if (x.count > acc.count) {
    throw ProtocolError("histogram subtraction would underflow a cell count");
  }
  acc.count -= x.count;
  if (acc.count == 0) {
    acc.values.clear();
  } else if (acc.empty()) {
    acc.values = ops.Negated(x.values);
  } else {
    if (acc.values.size() != x.values.size()) {
      throw ProtocolError("cell width mismatch");
    }
    ops.SubInto(acc.values, x.values);
  }
}

template <typename T>
class Histogram {
 public:
  Histogram() = default;
  explicit Histogram(std::shared_ptr<const HistogramLayout> layout)
      : layout_(std::move(layout)), cells_(layout_->num_cells()) {}

  const HistogramLayout& layout() const { return *layout_; }
  std::shared_ptr<const HistogramLayout> shared_layout() const { return layout_; }

  Cell<T>& at(size_t feature, int bin) {
    return cells_[layout_->offset(feature) + bin];
  }
  const Cell<T>& at(size_t feature, int bin) const {
    return cells_[layout_->offset(feature) + bin];
  }
  // Aggregate over every instance of the node.
  Cell<T>& total() { return total_; }
  const Cell<T>& total() const { return total_; }

  std::vector<Cell<T>>& cells() { return cells_; }
  const std::vector<Cell<T>>& cells() const { return cells_; }

 private:
  std::shared_ptr<const HistogramLayout> layout_;
  std::vector<Cell<T>> cells_;
  Cell<T> total_;
};

// Per-instance gradient payload: row i holds instance i's values, or nothing
// when the instance is not part of this tree's sample.
template <typename T>
using GhTable = std::vector<std::vector<T>>;

// Accumulates the stored (non-zero) entries of `instances` into a fresh
// histogram and sums the node total. Zero-value entries stay implicit until
// RecoverZeroBins.
template <typename T, typename Ops>
Histogram<T> BuildSparseHistogram(
    std::shared_ptr<const HistogramLayout> layout,
    const data::BinnedMatrix& binned, std::span<const uint32_t> instances,
    const GhTable<T>& gh, const Ops& ops) {
  Histogram<T> hist(std::move(layout));
  for (uint32_t i : instances) {
    const std::vector<T>& payload = gh[i];
    if (payload.empty()) continue;
    std::span<const T> x(payload);
    Accumulate(hist.total(), x, 1, ops);
    for (const auto& e : binned.Row(i)) {
      Accumulate(hist.at(e.feature, e.bin), x, 1, ops);
    }
  }
  return hist;
}

// zero_bin(f) += total - sum over stored cells of f. Skipped for features
// where every instance has a stored entry.
template <typename T, typename Ops>
void RecoverZeroBins(Histogram<T>& hist, const Ops& ops) {
  const HistogramLayout& layout = hist.layout();
  for (size_t f = 0; f < layout.num_features(); ++f) {
    int64_t stored = 0;
    for (int b = 0; b < layout.num_bins(f); ++b) stored += hist.at(f, b).count;
    if (stored == hist.total().count) continue;
    Cell<T> stored_sum;
    for (int b = 0; b < layout.num_bins(f); ++b) {
      Accumulate(stored_sum, hist.at(f, b), ops);
    }
    Cell<T> zero = hist.total();
    Remove(zero, stored_sum, ops);
    Accumulate(hist.at(f, layout.zero_bin(f)), zero, ops);
  }
}

template <typename T, typename Ops>
Histogram<T> BuildHistogram(std::shared_ptr<const HistogramLayout> layout,
                            const data::BinnedMatrix& binned,
                            std::span<const uint32_t> instances,
                            const GhTable<T>& gh, const Ops& ops) {
  Histogram<T> hist =
      BuildSparseHistogram(std::move(layout), binned, instances, gh, ops);
  RecoverZeroBins(hist, ops);
  return hist;
}

// Cell-wise parent - child, the histogram of the child's sibling.
template <typename T, typename Ops>
Histogram<T> SubtractHistogram(const Histogram<T>& parent,
                               const Histogram<T>& child, const Ops& ops) {
  Histogram<T> sibling = parent;
  for (size_t c = 0; c < sibling.cells().size(); ++c) {
    Remove(sibling.cells()[c], child.cells()[c], ops);
  }
  Remove(sibling.total(), child.total(), ops);
  return sibling;
}

template <typename T>
struct Candidate {
  uint32_t feature = 0;
  int bin = 0;  // left branch takes bins <= bin
  Cell<T> left;
};

// Prefix sums over bins, one candidate per (feature, bin) except the last
// bin. With drop_degenerate, candidates with an empty side, or whose left
// instance set equals the previous bin's, are omitted.
template <typename T, typename Ops>
std::vector<Candidate<T>> CumulativeCandidates(const Histogram<T>& hist,
                                               const Ops& ops,
                                               bool drop_degenerate) {
  const HistogramLayout& layout = hist.layout();
  const int64_t total = hist.total().count;
  std::vector<Candidate<T>> out;
  for (size_t f = 0; f < layout.num_features(); ++f) {
    Cell<T> acc;
    int64_t previous = -1;
    for (int b = 0; b + 1 < layout.num_bins(f); ++b) {
      Accumulate(acc, hist.at(f, b), ops);
      if (drop_degenerate &&
          (acc.count == 0 || acc.count == total || acc.count == previous)) {
        previous = acc.count;
        continue;
      }
      previous = acc.count;
      out.push_back({static_cast<uint32_t>(f), b, acc});
    }
  }
  return out;
}

}  // namespace sbt::tree

#endif  // SBT_TREE_HISTOGRAM_H_
