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

#include "privcoord/sharing_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "privcoord/errors.hpp"

namespace privcoord {

namespace {

void check_level(int level, int z) {
  if (z < 2) throw InvalidInput("number of levels must be at least 2");
  if (level < 1 || level > z) {
    throw InvalidInput("level " + std::to_string(level) + " outside [1, " + std::to_string(z) +
                       "]");
  }
}

std::vector<double> normalize_scores(std::span<const int> answers, const std::string& what) {
  std::vector<double> weights;
  weights.reserve(answers.size());
  double sum = 0.0;
  for (int a : answers) {
    if (a < 1 || a > 5) throw InvalidInput(what + ": Likert answer must be in 1..5");
    weights.push_back(a);
    sum += a;
  }
  if (weights.empty()) throw InvalidInput(what + ": no answers");
  for (double& w : weights) w /= sum;
  return weights;
}

}  // namespace

ScenarioCatalog ScenarioCatalog::enumerate(std::vector<Criterion> criteria) {
  if (criteria.empty()) throw InvalidInput("catalog needs at least one criterion");
  std::size_t m = 1;
  for (const auto& c : criteria) {
    if (c.elements.empty()) throw InvalidInput("criterion '" + c.name + "' has no elements");
    std::set<std::string> unique(c.elements.begin(), c.elements.end());
    if (unique.size() != c.elements.size()) {
      throw InvalidInput("criterion '" + c.name + "' has duplicate element names");
    }
    m *= c.elements.size();
  }

  ScenarioCatalog catalog;
  catalog.criteria_ = std::move(criteria);
  catalog.scenarios_.reserve(m);
  const std::size_t k = catalog.criteria_.size();
  std::vector<std::size_t> digits(k, 0);
  for (std::size_t id = 1; id <= m; ++id) {
    catalog.scenarios_.push_back(Scenario{id, digits});
    // Odometer increment, last criterion fastest.
    for (std::size_t u = k; u-- > 0;) {
      if (++digits[u] < catalog.criteria_[u].elements.size()) break;
      digits[u] = 0;
    }
  }
  return catalog;
}

ScenarioCatalog ScenarioCatalog::default_catalog() {
  return enumerate({
      {"sensor", {"acc", "lig", "noi", "gps"}},
      {"collector", {"cor", "ngo", "gov", "edu"}},
      {"context", {"soc", "env", "tra", "hea"}},
  });
}

std::size_t ScenarioCatalog::num_elements() const {
  std::size_t total = 0;
  for (const auto& c : criteria_) total += c.elements.size();
  return total;
}

const Scenario& ScenarioCatalog::scenario(std::size_t id) const {
  if (id < 1 || id > scenarios_.size()) {
    throw InvalidInput("scenario id " + std::to_string(id) + " out of range");
  }
  return scenarios_[id - 1];
}

std::vector<std::size_t> ScenarioCatalog::scenarios_with(std::size_t criterion,
                                                         std::size_t element) const {
  if (criterion >= criteria_.size() || element >= criteria_[criterion].elements.size()) {
    throw InvalidInput("element index out of range");
  }
  std::vector<std::size_t> ids;
  for (const auto& s : scenarios_) {
    if (s.elements[criterion] == element) ids.push_back(s.id);
  }
  return ids;
}

std::optional<std::pair<std::size_t, std::size_t>> ScenarioCatalog::find_element(
    const std::string& label) const {
  for (std::size_t u = 0; u < criteria_.size(); ++u) {
    const auto& els = criteria_[u].elements;
    auto it = std::find(els.begin(), els.end(), label);
    if (it != els.end()) return std::pair{u, static_cast<std::size_t>(it - els.begin())};
  }
  return std::nullopt;
}

std::vector<std::string> ScenarioCatalog::element_labels() const {
  std::vector<std::string> labels;
  for (const auto& c : criteria_) labels.insert(labels.end(), c.elements.begin(), c.elements.end());
  return labels;
}

void WeightProfile::validate(const ScenarioCatalog& catalog) const {
  const std::size_t k = catalog.num_criteria();
  if (criterion_weights.size() != k || element_weights.size() != k) {
    throw InvalidInput("profile '" + participant_id + "': expected " + std::to_string(k) +
                       " criteria");
  }
  auto check_simplex = [&](std::span<const double> w, const std::string& what) {
    double sum = 0.0;
    for (double x : w) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidInput("profile '" + participant_id + "': " + what + " weight outside [0,1]");
      }
      sum += x;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
      throw InvalidInput("profile '" + participant_id + "': " + what + " weights do not sum to 1");
    }
  };
  check_simplex(criterion_weights, "criterion");
  for (std::size_t u = 0; u < k; ++u) {
    if (element_weights[u].size() != catalog.criteria()[u].elements.size()) {
      throw InvalidInput("profile '" + participant_id + "': element count mismatch for '" +
                         catalog.criteria()[u].name + "'");
    }
    check_simplex(element_weights[u], catalog.criteria()[u].name);
  }
}

WeightProfile WeightProfile::uniform(const ScenarioCatalog& catalog, std::string id) {
  WeightProfile p;
  p.participant_id = std::move(id);
  const std::size_t k = catalog.num_criteria();
  p.criterion_weights.assign(k, 1.0 / static_cast<double>(k));
  for (const auto& c : catalog.criteria()) {
    p.element_weights.emplace_back(c.elements.size(), 1.0 / static_cast<double>(c.elements.size()));
  }
  return p;
}

WeightProfile WeightProfile::from_likert(std::string id, std::span<const int> criterion_answers,
                                         const std::vector<std::vector<int>>& element_answers) {
  if (criterion_answers.size() != element_answers.size()) {
    throw InvalidInput("from_likert: criterion and element answer counts differ");
  }
  WeightProfile p;
  p.participant_id = std::move(id);
  p.criterion_weights = normalize_scores(criterion_answers, "criteria");
  for (const auto& row : element_answers) {
    p.element_weights.push_back(normalize_scores(row, "elements"));
  }
  return p;
}

Budget Budget::from_parts(double participation, double sharing) {
  Budget b{participation + sharing, participation, sharing};
  b.validate();
  return b;
}

void Budget::validate() const {
  if (total < 0.0 || participation < 0.0 || sharing < 0.0) {
    throw InvalidInput("budget components must be non-negative");
  }
  if (std::abs(total - (participation + sharing)) > kTolerance) {
    throw InvalidInput("budget total must equal participation + sharing");
  }
}

const char* to_string(RewardMode mode) {
  return mode == RewardMode::Linear ? "linear" : "geometric";
}

RewardMode reward_mode_from_string(const std::string& text) {
  if (text == "linear") return RewardMode::Linear;
  if (text == "geometric") return RewardMode::Geometric;
  throw InvalidInput("unknown reward mode '" + text + "'");
}

void SelectionVector::validate() const {
  if (z < 2) throw InvalidInput("selection: z must be at least 2");
  for (int s : levels) check_level(s, z);
}

SelectionVector SelectionVector::constant(std::size_t m, int level, int z) {
  SelectionVector s{std::vector<int>(m, level), z};
  s.validate();
  return s;
}

double RewardModel::pool() const {
  return mode == RewardMode::Linear ? budget.sharing : budget.total;
}

double RewardModel::reward(double max_reward, int level) const {
  return mode == RewardMode::Linear ? linear_rewards(max_reward, level, levels)
                                    : geometric_rewards(max_reward, level, levels, budget);
}

double scenario_weight(const WeightProfile& profile, const Scenario& scenario) {
  if (scenario.elements.size() != profile.criterion_weights.size() ||
      profile.element_weights.size() != profile.criterion_weights.size()) {
    throw InvalidInput("scenario_weight: profile and scenario dimensions differ");
  }
  double w = 0.0;
  for (std::size_t u = 0; u < scenario.elements.size(); ++u) {
    const auto& row = profile.element_weights[u];
    if (scenario.elements[u] >= row.size()) {
      throw InvalidInput("scenario_weight: element index exceeds profile");
    }
    w += profile.criterion_weights[u] * row[scenario.elements[u]];
  }
  return w;
}

double total_weight(const WeightProfile& profile, const ScenarioCatalog& catalog) {
  double total = 0.0;
  for (const auto& s : catalog.scenarios()) total += scenario_weight(profile, s);
  return total;
}

std::vector<double> max_rewards(const WeightProfile& profile, const ScenarioCatalog& catalog,
                                double pool) {
  if (pool < 0.0) throw InvalidInput("max_rewards: pool must be non-negative");
  std::vector<double> weights;
  weights.reserve(catalog.size());
  double total = 0.0;
  for (const auto& s : catalog.scenarios()) {
    weights.push_back(scenario_weight(profile, s));
    total += weights.back();
  }
  if (!(total > 0.0)) {
    throw DegenerateProfile("profile '" + profile.participant_id + "' has zero total weight");
  }
  for (double& w : weights) w = w / total * pool;
  return weights;
}

double linear_rewards(double max_reward, int level, int z) {
  check_level(level, z);
  return static_cast<double>(z - level) / static_cast<double>(z - 1) * max_reward;
}

double geometric_rewards(double max_reward, int level, int z, const Budget& budget) {
  check_level(level, z);
  if (!(budget.total > 0.0)) throw InvalidInput("geometric_rewards: total budget must be positive");
  if (budget.participation < 0.0 || budget.participation > budget.total) {
    throw InvalidInput("geometric_rewards: participation budget must lie in [0, total]");
  }
  // ((Bp/B)^(1/(z-1)))^(s-1) written with a single exponent so that the
  // endpoints s = 1 and s = z are exact.
  const double exponent = static_cast<double>(level - 1) / static_cast<double>(z - 1);
  return max_reward * std::pow(budget.participation / budget.total, exponent);
}

double total_rewards(const RewardModel& model, std::span<const double> max_rewards,
                     const SelectionVector& selection) {
  if (max_rewards.size() != selection.size()) {
    throw InvalidInput("total_rewards: selection and reward lengths differ");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < selection.size(); ++j) {
    total += model.reward(max_rewards[j], selection.levels[j]);
  }
  return total;
}

double privacy_score(const SelectionVector& selection) {
  selection.validate();
  if (selection.levels.empty()) throw InvalidInput("privacy_score: empty selection");
  double sum = 0.0;
  for (int s : selection.levels) sum += s - 1;
  return sum / (static_cast<double>(selection.z - 1) * static_cast<double>(selection.size()));
}

const char* to_string(ValuationScheme::Kind kind) {
  switch (kind) {
    case ValuationScheme::Kind::AbsoluteSharedData:
      return "absolute_shared_data";
    case ValuationScheme::Kind::AbsoluteSacrificedRewards:
      return "absolute_sacrificed_rewards";
    case ValuationScheme::Kind::RelativeSharedData:
      return "relative_shared_data";
    case ValuationScheme::Kind::RelativeSacrificedRewards:
      return "relative_sacrificed_rewards";
  }
  return "unknown";
}

double privacy_cost(double gained_rewards, const ValuationScheme& scheme, double sharing_budget) {
  if (scheme.requires_intrinsic() && !scheme.intrinsic_rewards) {
    throw MissingParameter(std::string(to_string(scheme.kind)) +
                           " requires the intrinsic rewards baseline");
  }
  switch (scheme.kind) {
    case ValuationScheme::Kind::AbsoluteSharedData:
      return gained_rewards;
    case ValuationScheme::Kind::AbsoluteSacrificedRewards:
      return gained_rewards - sharing_budget;
    case ValuationScheme::Kind::RelativeSharedData:
      return gained_rewards - *scheme.intrinsic_rewards;
    case ValuationScheme::Kind::RelativeSacrificedRewards:
      return gained_rewards - (sharing_budget - *scheme.intrinsic_rewards);
  }
  return gained_rewards;
}

}  // namespace privcoord
