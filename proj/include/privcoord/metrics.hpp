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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privcoord/collective_learning.hpp"
#include "privcoord/sharing_model.hpp"

namespace privcoord {

/// Per-participant normalized privacy (0 = share all, 1 = share nothing) of
/// one condition.
struct ConditionSnapshot {
  std::string label;
  std::vector<std::vector<double>> privacy;  // [participant][scenario]

  std::size_t participants() const { return privacy.size(); }

  static ConditionSnapshot from_selections(std::string label,
                                           std::span<const SelectionVector> selections);

  /// Coordinated snapshot: each participant's privacy 1 - value of the
  /// selected plan, averaged over repetitions.
  static ConditionSnapshot from_runs(std::string label, std::span<const CoordinationRun> runs,
                                     std::span<const PlanPortfolio> portfolios);
};

/// Mean privacy P_j per scenario across participants.
std::vector<double> scenario_privacy(const ConditionSnapshot& snapshot);

/// Mean of P_j over the scenarios containing each element, [criterion][element].
std::vector<std::vector<double>> element_privacy(std::span<const double> scenario_privacy,
                                                 const ScenarioCatalog& catalog);

/// Mean of a scenario's element privacies, per scenario.
std::vector<double> expected_scenario_privacy(std::span<const double> scenario_privacy,
                                              const ScenarioCatalog& catalog);

/// Mean expected scenario privacy over the scenarios containing each element.
std::vector<std::vector<double>> expected_element_privacy(std::span<const double> scenario_privacy,
                                                          const ScenarioCatalog& catalog);

struct ReinforcementReport {
  std::vector<std::vector<double>> expected;
  std::vector<std::vector<double>> actual;
  // (actual - expected) / expected; empty where expected is zero.
  std::vector<std::vector<std::optional<double>>> reinforcement;
};

ReinforcementReport reinforcement(std::span<const double> scenario_privacy,
                                  const ScenarioCatalog& catalog);

/// Rewards one participant gains for a selection under the reward model.
double participant_rewards(const SelectionVector& selection, const WeightProfile& profile,
                           const ScenarioCatalog& catalog, const RewardModel& model);

/// Total rewards over participants; profiles align with selections.
double collection_cost(std::span<const SelectionVector> selections,
                       std::span<const WeightProfile> profiles, const ScenarioCatalog& catalog,
                       const RewardModel& model);

struct CoordinatedCost {
  std::vector<double> per_repetition;
  double mean = 0.0;
  double sd = 0.0;  // population standard deviation
};

/// Prices every selected plan by the rewards of its own condition.
///
/// `plan_rewards[agent][plan]` holds the rewards of each recorded plan. When
/// `include_intrinsic` is false, plans labelled "intrinsic" cost nothing.
CoordinatedCost coordinated_collection_cost(std::span<const CoordinationRun> runs,
                                            std::span<const PlanPortfolio> portfolios,
                                            const std::vector<std::vector<double>>& plan_rewards,
                                            bool include_intrinsic);

/// Mean privacy over all participants and scenarios.
double mean_privacy(const ConditionSnapshot& snapshot);

/// Percentage of the rewarded privacy loss regained by coordination. Empty
/// when intrinsic and rewarded privacy differ by less than 1e-9.
std::optional<double> privacy_recovery(double rewarded, double coordinated, double intrinsic);

/// Snapshot form; throws InvalidInput when the populations differ in size.
std::optional<double> privacy_recovery(const ConditionSnapshot& rewarded,
                                       const ConditionSnapshot& coordinated,
                                       const ConditionSnapshot& intrinsic);

}  // namespace privcoord
