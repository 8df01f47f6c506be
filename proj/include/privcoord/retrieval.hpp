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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "privcoord/sharing_model.hpp"

namespace privcoord {

enum class Goal { ImprovePrivacy, ImproveRewards };

const char* to_string(Goal goal);

/// Locked-in choices of one participant with their derived balance.
struct BalanceState {
  SelectionVector selection;
  double accumulated_rewards = 0.0;
  double privacy = 0.0;
};

/// One answered scenario in the dilemma loop, for replay and audit.
struct ChoiceEvent {
  std::string participant_id;
  std::size_t step = 0;
  std::string goal;  // "privacy", "rewards" or "first_pass"
  std::size_t scenario_id = 0;
  int option = 0;
  double rewards_after = 0.0;
  double privacy_after = 0.0;
};

/// Privacy/rewards dilemma loop for one participant.
///
/// Holds the participant's per-scenario maximum rewards and the reward
/// configuration; states are values and every operation returns a new one.
class RetrievalEngine {
 public:
  RetrievalEngine(std::vector<double> max_rewards, RewardModel model);

  std::size_t num_scenarios() const { return max_rewards_.size(); }
  int levels() const { return model_.levels; }
  const RewardModel& model() const { return model_; }
  const std::vector<double>& max_rewards() const { return max_rewards_; }

  BalanceState make_state(SelectionVector selection) const;

  /// Signed change of the goal metric for every option 1..z of scenario
  /// `scenario_id` (1-based); index o - 1 holds option o.
  std::vector<double> improvement(const BalanceState& state, std::size_t scenario_id,
                                  Goal goal) const;

  /// Options (1-based) whose goal delta is strictly positive.
  std::vector<int> improvement_box(const BalanceState& state, std::size_t scenario_id,
                                   Goal goal) const;

  /// Scenario whose best option improves the goal most, lowest id on ties.
  /// Returns nullopt when no scenario can improve the goal (saturation).
  std::optional<std::size_t> retrieve_next(const BalanceState& state, Goal goal) const;

  /// Overwrites the choice for `scenario_id` and recomputes the balance.
  BalanceState apply_choice(const BalanceState& state, std::size_t scenario_id, int option) const;

 private:
  void check(const BalanceState& state, std::size_t scenario_id) const;

  std::vector<double> max_rewards_;
  RewardModel model_;
};

}  // namespace privcoord
