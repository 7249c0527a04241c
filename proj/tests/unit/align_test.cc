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

#include "sbt/data/align.h"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "sbt/common/error.h"
#include "sbt/data/synthetic.h"

namespace sbt::data {
namespace {

using Ids = std::vector<std::string>;

TEST(AlignTest, IntersectsInFirstPartyOrder) {
  std::vector<Ids> lists{{"1", "2", "3"}, {"2", "3", "4"}};
  EXPECT_EQ(IntersectIds(lists), (Ids{"2", "3"}));
  std::vector<Ids> reordered{{"3", "1", "2"}, {"2", "3", "1"}};
  EXPECT_EQ(IntersectIds(reordered), (Ids{"3", "1", "2"}));
}

TEST(AlignTest, IdenticalListsKeepEverything) {
  std::vector<Ids> lists{{"a", "b", "c"}, {"a", "b", "c"}, {"c", "b", "a"}};
  EXPECT_EQ(IntersectIds(lists), (Ids{"a", "b", "c"}));
}

TEST(AlignTest, DisjointOrSingleListIsAnError) {
  std::vector<Ids> disjoint{{"1"}, {"2"}};
  EXPECT_THROW(IntersectIds(disjoint), DataError);
  std::vector<Ids> single{{"1"}};
  EXPECT_THROW(IntersectIds(single), DataError);
}

TEST(AlignTest, SaltChangesDigests) {
  Ids ids{"x"};
  EXPECT_NE(HashIds(ids, "a"), HashIds(ids, "b"));
  EXPECT_EQ(HashIds(ids, "a"), HashIds(ids, "a"));
}

TEST(AlignTest, AlignRowsReordersFeaturesAndLabels) {
  PartyDataset ds = MakeSyntheticBinary(5, 2, 1);
  Ids order{ds.instance_ids[3], ds.instance_ids[0]};
  auto digests = HashIds(order, "s");
  PartyDataset out = AlignRows(ds, "s", digests);
  ASSERT_EQ(out.num_instances(), 2u);
  EXPECT_EQ(out.instance_ids, order);
  EXPECT_EQ(out.features.at(0, 1), ds.features.at(3, 1));
  EXPECT_EQ((*out.labels)[1], (*ds.labels)[0]);
  Ids unknown{"nope"};
  EXPECT_THROW(AlignRows(ds, "s", HashIds(unknown, "s")), DataError);
}

TEST(VerticalSplitTest, EqualHalves) {
  PartyDataset ds = MakeSyntheticBinary(8, 10, 2);
  std::vector<double> f{0.5, 0.5};
  auto parts = VerticalSplit(ds, f);
  EXPECT_EQ(parts[0].num_features(), 5u);
  EXPECT_EQ(parts[1].num_features(), 5u);
  EXPECT_TRUE(parts[0].labels.has_value());
  EXPECT_FALSE(parts[1].labels.has_value());
  EXPECT_EQ(parts[1].features.at(3, 0), ds.features.at(3, 5));
}

TEST(VerticalSplitTest, HiggsLikeSplit) {
  PartyDataset ds = MakeSyntheticBinary(4, 28, 2);
  std::vector<double> f{13.0 / 28, 15.0 / 28};
  auto parts = VerticalSplit(ds, f);
  EXPECT_EQ(parts[0].num_features(), 13u);
  EXPECT_EQ(parts[1].num_features(), 15u);
}

TEST(VerticalSplitTest, DegenerateHostWithNothing) {
  PartyDataset ds = MakeSyntheticBinary(4, 1, 2);
  std::vector<double> f{1.0, 0.0};
  auto parts = VerticalSplit(ds, f);
  EXPECT_EQ(parts[0].num_features(), 1u);
  EXPECT_EQ(parts[1].num_features(), 0u);
  EXPECT_EQ(parts[1].num_instances(), 4u);
}

TEST(VerticalSplitTest, BadFractions) {
  PartyDataset ds = MakeSyntheticBinary(4, 4, 2);
  std::vector<double> bad{0.5, 0.6};
  EXPECT_THROW(VerticalSplit(ds, bad), ConfigError);
  std::vector<double> one{1.0};
  EXPECT_THROW(VerticalSplit(ds, one), ConfigError);
}

}  // namespace
}  // namespace sbt::data
