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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privcoord/collective_learning.hpp"
#include "privcoord/kmeans.hpp"
#include "privcoord/retrieval.hpp"
#include "privcoord/sharing_model.hpp"

namespace privcoord {

enum class GroupKind {
  PrivacyIgnorant,
  PrivacyNeutral,
  PrivacyPreserver,
  RewardSeeker,
  RewardOpportunist
};

inline constexpr std::size_t kNumGroups = 5;
inline constexpr std::array<GroupKind, kNumGroups> kAllGroups = {
    GroupKind::PrivacyIgnorant, GroupKind::PrivacyNeutral, GroupKind::PrivacyPreserver,
    GroupKind::RewardSeeker, GroupKind::RewardOpportunist};

const char* to_string(GroupKind kind);
GroupKind group_from_string(const std::string& text);

enum class Condition { Intrinsic, Rewarded1, Rewarded2 };

inline constexpr std::array<Condition, 3> kAllConditions = {
    Condition::Intrinsic, Condition::Rewarded1, Condition::Rewarded2};

const char* to_string(Condition condition);
Condition condition_from_string(const std::string& text);

/// Choice behavior of one group with and without rewards.
///
/// Policies are distributions over levels 1..z. `drift` is the relative
/// privacy change a participant steers toward while reassessing rewarded
/// choices (e.g. -0.3 aims 30% below the first-pass privacy).
struct GroupBehavior {
  GroupKind kind = GroupKind::PrivacyNeutral;
  std::vector<double> intrinsic_policy;
  std::vector<double> rewarded_policy;
  double drift = 0.0;

  void validate(int z) const;

  /// Low/moderate/high sharing mapped to levels z/3/1 with unit spread.
  static GroupBehavior defaults(GroupKind kind, int z = kDefaultLevels);
};

/// Discrete Gaussian over levels 1..z centered at `center`, normalized.
std::vector<double> centered_policy(double center, double spread, int z);

/// Population shares per group, indexed like kAllGroups.
struct GroupMix {
  std::array<double, kNumGroups> fractions{};

  /// Preservers+opportunists 26.2%, neutrals+seekers 57.14%, ignorants 16.7%,
  /// each pair split evenly.
  static GroupMix standard();

  /// Throws InvalidInput on negative shares or a sum off 1 by more than 1e-3;
  /// returns the shares rescaled to sum to exactly 1.
  std::array<double, kNumGroups> normalized() const;
};

/// Integer counts summing to n from fractions, by largest remainder (ties to
/// the lower index).
std::vector<std::size_t> largest_remainder_counts(std::size_t n, std::span<const double> fractions);

/// Everything needed to generate and simulate a synthetic population.
struct PopulationSpec {
  std::size_t n = 84;
  GroupMix mix = GroupMix::standard();
  int z = kDefaultLevels;
  std::uint64_t seed = 20160607;
  std::size_t steps = 128;     // answered scenarios per rewarded condition
  double sensitivity = 2.0;    // tilt of choices toward privacy on sensitive scenarios
  std::array<GroupBehavior, kNumGroups> behaviors = default_behaviors(kDefaultLevels);
  // Population-level Likert centers; participants deviate by at most one point.
  std::vector<int> criterion_centers;
  std::vector<std::vector<int>> element_centers;

  static std::array<GroupBehavior, kNumGroups> default_behaviors(int z);
};

struct SyntheticParticipant {
  WeightProfile profile;
  GroupKind group = GroupKind::PrivacyNeutral;
  std::uint64_t seed = 0;
};

struct SyntheticPopulation {
  std::vector<SyntheticParticipant> participants;
  std::array<double, kNumGroups> mix{};
  int z = kDefaultLevels;
  std::array<GroupBehavior, kNumGroups> behaviors;
};

SyntheticPopulation generate_population(const PopulationSpec& spec,
                                        const ScenarioCatalog& catalog);

inline SyntheticPopulation generate_population(std::size_t n, const GroupMix& mix,
                                               std::uint64_t master_seed,
                                               const ScenarioCatalog& catalog) {
  PopulationSpec spec;
  spec.n = n;
  spec.mix = mix;
  spec.seed = master_seed;
  return generate_population(spec, catalog);
}

struct SimulationSettings {
  std::size_t steps = 128;
  double sensitivity = 2.0;
  RewardModel reward_model;
};

struct ConditionResult {
  SelectionVector selection;
  std::vector<ChoiceEvent> events;
};

/// Choices of one participant under one condition.
///
/// Intrinsic draws every scenario once from the intrinsic policy. Rewarded
/// conditions draw a first pass from the rewarded policy, then spend the
/// remaining `steps - m` answers in the retrieval loop, picking the goal that
/// moves privacy toward the drift target and the improvement-box option
/// landing closest to it.
ConditionResult simulate_condition(const SyntheticParticipant& participant,
                                   const GroupBehavior& behavior, Condition condition,
                                   const ScenarioCatalog& catalog,
                                   const SimulationSettings& settings);

/// Recorded choices of one participant, indexed like kAllConditions.
struct ParticipantRecord {
  std::string id;
  std::array<std::optional<SelectionVector>, 3> conditions;

  const SelectionVector& at(Condition c) const;
};

/// Plan values (z - s) / (z - 1) per scenario with the mean as local cost.
Plan plan_from_selection(const SelectionVector& selection, std::string label);

/// Intrinsic, 1st and 2nd rewarded plans. Throws IncompletePortfolio when a
/// condition is missing.
PlanPortfolio build_portfolio(const ParticipantRecord& record);
std::vector<PlanPortfolio> build_portfolios(std::span<const ParticipantRecord> records);

/// k-means over per-participant (intrinsic privacy, rewarded privacy) points.
KMeansResult extract_groups(const std::vector<Point>& points, std::size_t k, std::uint64_t seed);

}  // namespace privcoord
