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

#include "privcoord/retrieval.hpp"

#include <algorithm>

#include "privcoord/errors.hpp"

namespace privcoord {

const char* to_string(Goal goal) {
  return goal == Goal::ImprovePrivacy ? "privacy" : "rewards";
}

RetrievalEngine::RetrievalEngine(std::vector<double> max_rewards, RewardModel model)
    : max_rewards_(std::move(max_rewards)), model_(model) {
  if (max_rewards_.empty()) throw InvalidInput("retrieval engine needs at least one scenario");
  if (model_.levels < 2) throw InvalidInput("retrieval engine needs at least two levels");
}

BalanceState RetrievalEngine::make_state(SelectionVector selection) const {
  if (selection.size() != max_rewards_.size() || selection.z != model_.levels) {
    throw InvalidInput("selection does not match the engine's scenarios or levels");
  }
  selection.validate();
  BalanceState state;
  state.accumulated_rewards = total_rewards(model_, max_rewards_, selection);
  state.privacy = privacy_score(selection);
  state.selection = std::move(selection);
  return state;
}

void RetrievalEngine::check(const BalanceState& state, std::size_t scenario_id) const {
  if (state.selection.size() != max_rewards_.size()) {
    throw InvalidInput("state does not match the engine's scenarios");
  }
  if (scenario_id < 1 || scenario_id > max_rewards_.size()) {
    throw InvalidInput("scenario id " + std::to_string(scenario_id) + " out of range");
  }
}

std::vector<double> RetrievalEngine::improvement(const BalanceState& state,
                                                 std::size_t scenario_id, Goal goal) const {
  check(state, scenario_id);
  const int z = model_.levels;
  const int current = state.selection.levels[scenario_id - 1];
  const double rmax = max_rewards_[scenario_id - 1];
  const double privacy_step =
      1.0 / (static_cast<double>(z - 1) * static_cast<double>(max_rewards_.size()));
  const double current_reward = model_.reward(rmax, current);

  std::vector<double> deltas(static_cast<std::size_t>(z), 0.0);
  for (int o = 1; o <= z; ++o) {
    if (o == current) continue;
    deltas[o - 1] = goal == Goal::ImprovePrivacy ? (o - current) * privacy_step
                                                 : model_.reward(rmax, o) - current_reward;
  }
  return deltas;
}

std::vector<int> RetrievalEngine::improvement_box(const BalanceState& state,
                                                  std::size_t scenario_id, Goal goal) const {
  const auto deltas = improvement(state, scenario_id, goal);
  std::vector<int> box;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] > 0.0) box.push_back(static_cast<int>(i) + 1);
  }
  return box;
}

std::optional<std::size_t> RetrievalEngine::retrieve_next(const BalanceState& state,
                                                          Goal goal) const {
  std::optional<std::size_t> best;
  double best_gain = 0.0;
  for (std::size_t id = 1; id <= max_rewards_.size(); ++id) {
    double gain = 0.0;
    for (double d : improvement(state, id, goal)) gain = std::max(gain, d);
    if (gain > best_gain) {
      best_gain = gain;
      best = id;
    }
  }
  return best;
}

BalanceState RetrievalEngine::apply_choice(const BalanceState& state, std::size_t scenario_id,
                                           int option) const {
  check(state, scenario_id);
  if (option < 1 || option > model_.levels) {
    throw InvalidInput("option " + std::to_string(option) + " outside [1, z]");
  }
  SelectionVector next = state.selection;
  next.levels[scenario_id - 1] = option;
  return make_state(std::move(next));
}

}  // namespace privcoord
