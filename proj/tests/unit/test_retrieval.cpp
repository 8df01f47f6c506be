// Copyright 2026 The privcoord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "privcoord/retrieval.hpp"

using namespace privcoord;

namespace {

const ScenarioCatalog& catalog() {
  static const auto cat = ScenarioCatalog::default_catalog();
  return cat;
}

RetrievalEngine engine(RewardMode mode = RewardMode::Linear) {
  RewardModel model{Budget{}, 5, mode};
  return RetrievalEngine(max_rewards(WeightProfile::uniform(catalog()), catalog(), model.pool()),
                         model);
}

}  // namespace

TEST_CASE("privacy deltas are linear in the option") {
  const auto e = engine();
  const auto state = e.make_state(SelectionVector::constant(64, 1));
  const auto d = e.improvement(state, 1, Goal::ImprovePrivacy);
  REQUIRE(d.size() == 5);
  for (int o = 0; o < 5; ++o) CHECK(d[o] == doctest::Approx(o / (4.0 * 64)));
}

TEST_CASE("reward delta from share-nothing to share-all is Rmax") {
  const auto e = engine();
  const auto state = e.make_state(SelectionVector::constant(64, 5));
  const auto d = e.improvement(state, 7, Goal::ImproveRewards);
  CHECK(d[0] == doctest::Approx(e.max_rewards()[6]));
  CHECK(d[4] == 0.0);
}

TEST_CASE("improvement box") {
  const auto e = engine();
  const auto s1 = e.make_state(SelectionVector::constant(64, 1));
  CHECK(e.improvement_box(s1, 1, Goal::ImprovePrivacy) == std::vector<int>{2, 3, 4, 5});
  CHECK(e.improvement_box(s1, 1, Goal::ImproveRewards).empty());
  const auto s3 = e.make_state(SelectionVector::constant(64, 3));
  CHECK(e.improvement_box(s3, 1, Goal::ImprovePrivacy) == std::vector<int>{4, 5});
}

TEST_CASE("retrieval picks the largest gain, lowest id on ties") {
  const auto e = engine();
  const auto none = e.make_state(SelectionVector::constant(64, 5));
  CHECK(e.retrieve_next(none, Goal::ImproveRewards) == std::optional<std::size_t>(1));

  auto profile = WeightProfile::uniform(catalog());
  // Raising one GPS weight makes the (gps, cor, soc) scenario the most valuable.
  profile.element_weights[0] = {0.2, 0.2, 0.2, 0.4};
  profile.element_weights[1] = {0.4, 0.2, 0.2, 0.2};
  profile.element_weights[2] = {0.4, 0.2, 0.2, 0.2};
  RewardModel model{Budget{}, 5, RewardMode::Linear};
  RetrievalEngine weighted(max_rewards(profile, catalog(), model.pool()), model);
  const auto s = weighted.make_state(SelectionVector::constant(64, 5));
  const auto id = weighted.retrieve_next(s, Goal::ImproveRewards);
  REQUIRE(id.has_value());
  CHECK(catalog().scenario(*id).elements == std::vector<std::size_t>{3, 0, 0});

  const auto all = e.make_state(SelectionVector::constant(64, 1));
  CHECK_FALSE(e.retrieve_next(all, Goal::ImproveRewards).has_value());
}

TEST_CASE("apply choice overwrites and recomputes") {
  for (auto mode : {RewardMode::Linear, RewardMode::Geometric}) {
    const auto e = engine(mode);
    auto state = e.make_state(SelectionVector::constant(64, 5));
    const auto same = e.apply_choice(state, 3, 5);
    CHECK(same.accumulated_rewards == state.accumulated_rewards);
    CHECK(same.selection.levels == state.selection.levels);
    for (std::size_t j = 1; j <= 64; ++j) state = e.apply_choice(state, j, 1);
    CHECK(state.accumulated_rewards == doctest::Approx(e.model().pool()));
    CHECK(state.privacy == 0.0);

    auto a = e.make_state(SelectionVector::constant(64, 1));
    a = e.apply_choice(a, 2, 5);
    a = e.apply_choice(a, 2, 3);
    auto b = e.make_state(SelectionVector::constant(64, 1));
    b = e.apply_choice(b, 2, 3);
    CHECK(a.accumulated_rewards == doctest::Approx(b.accumulated_rewards));
  }
}

TEST_CASE("goal names") {
  CHECK(std::string(to_string(Goal::ImprovePrivacy)) == "privacy");
  CHECK(std::string(to_string(Goal::ImproveRewards)) == "rewards");
}
