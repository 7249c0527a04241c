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

#include "sbt/modes/modes.h"

#include <gtest/gtest.h>

#include "sbt/common/error.h"

namespace sbt::modes {
namespace {

TEST(ModesTest, ParseAndName) {
  for (Mode m : {Mode::kDefault, Mode::kMix, Mode::kLayered, Mode::kMultiOutput}) {
    EXPECT_EQ(ParseMode(ModeName(m)), m);
  }
  EXPECT_THROW(ParseMode("bogus"), ConfigError);
}

TEST(ModesTest, MixOwnerRoundRobin) {
  EXPECT_EQ(MixOwner(0, 2, 1), 0);
  EXPECT_EQ(MixOwner(1, 2, 1), 1);
  EXPECT_EQ(MixOwner(2, 2, 1), 0);
  EXPECT_EQ(MixOwner(3, 2, 1), 1);
  EXPECT_EQ(MixOwner(0, 2, 2), 0);
  EXPECT_EQ(MixOwner(1, 2, 2), 0);
  EXPECT_EQ(MixOwner(2, 2, 2), 1);
  EXPECT_EQ(MixOwner(3, 2, 2), 1);
  EXPECT_EQ(MixOwner(5, 3, 1), 2);
}

TEST(ModesTest, DefaultPlanFederatesEveryLayer) {
  TreePlan p = PlanTree(ModeConfig{}, 0, 2, 3);
  ASSERT_EQ(p.layers.size(), 3u);
  for (const auto& l : p.layers) {
    EXPECT_TRUE(l.guest);
    EXPECT_EQ(l.hosts, (std::vector<int>{1, 2}));
  }
  EXPECT_EQ(p.owner, -1);
  EXPECT_FALSE(p.multi_output);
}

TEST(ModesTest, MixPlanUsesOnlyOwner) {
  ModeConfig c{Mode::kMix, 1, 0, 0};
  TreePlan guest_tree = PlanTree(c, 0, 1, 3);
  EXPECT_EQ(guest_tree.owner, 0);
  EXPECT_TRUE(guest_tree.Hosts().empty());
  for (const auto& l : guest_tree.layers) EXPECT_TRUE(l.guest);
  TreePlan host_tree = PlanTree(c, 1, 1, 3);
  EXPECT_EQ(host_tree.owner, 1);
  EXPECT_EQ(host_tree.Hosts(), (std::vector<int>{1}));
  for (const auto& l : host_tree.layers) EXPECT_FALSE(l.guest);
}

TEST(ModesTest, LayeredPlan) {
  ModeConfig c{Mode::kLayered, 1, 2, 3};
  TreePlan p = PlanTree(c, 0, 2, 5);
  for (int d = 0; d < 3; ++d) {
    EXPECT_FALSE(p.layers[d].guest);
    EXPECT_EQ(p.layers[d].hosts.size(), 2u);
  }
  for (int d = 3; d < 5; ++d) {
    EXPECT_TRUE(p.layers[d].guest);
    EXPECT_FALSE(p.layers[d].federated());
  }
  ModeConfig guest_only{Mode::kLayered, 1, 4, 0};
  EXPECT_TRUE(PlanTree(guest_only, 0, 1, 4).Hosts().empty());
  ModeConfig host_only{Mode::kLayered, 1, 0, 4};
  for (const auto& l : PlanTree(host_only, 0, 1, 4).layers) EXPECT_FALSE(l.guest);
}

TEST(ModesTest, MultiOutputFlag) {
  ModeConfig c{Mode::kMultiOutput};
  EXPECT_TRUE(PlanTree(c, 0, 1, 2).multi_output);
}

TEST(ModesTest, Validation) {
  EXPECT_THROW((ModeConfig{Mode::kLayered, 1, 2, 2}.Validate(5, 1)), ConfigError);
  EXPECT_NO_THROW((ModeConfig{Mode::kLayered, 1, 2, 3}.Validate(5, 1)));
  EXPECT_THROW((ModeConfig{Mode::kMix, 0, 2, 3}.Validate(5, 1)), ConfigError);
  EXPECT_THROW((ModeConfig{Mode::kMix, 1, 2, 3}.Validate(5, 0)), ConfigError);
}

}  // namespace
}  // namespace sbt::modes
