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
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace privcoord {

// Absolute tolerance for weight normalization and budget conservation.
inline constexpr double kTolerance = 1e-9;

inline constexpr int kDefaultLevels = 5;

/// One dimension of the factorial design (e.g. data collector) with its
/// ordered elements (e.g. corporation, NGO, government, education).
struct Criterion {
  std::string name;
  std::vector<std::string> elements;
};

/// A data-sharing scenario: one element per criterion.
///
/// `id` is 1-based and follows the catalog enumeration order. Element
/// indices are 0-based positions into each criterion's element list.
struct Scenario {
  std::size_t id = 0;
  std::vector<std::size_t> elements;
};

/// Full factorial space of scenarios, enumerated lexicographically with the
/// first criterion outermost.
class ScenarioCatalog {
 public:
  /// Throws InvalidInput on an empty criterion list, a criterion without
  /// elements, or duplicate element names within a criterion.
  static ScenarioCatalog enumerate(std::vector<Criterion> criteria);

  /// Sensors x collectors x contexts, 4 elements each (64 scenarios).
  static ScenarioCatalog default_catalog();

  const std::vector<Criterion>& criteria() const { return criteria_; }
  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  std::size_t size() const { return scenarios_.size(); }
  std::size_t num_criteria() const { return criteria_.size(); }
  std::size_t num_elements() const;

  /// Scenario by 1-based id.
  const Scenario& scenario(std::size_t id) const;

  /// 1-based ids of the scenarios containing element `element` of `criterion`.
  std::vector<std::size_t> scenarios_with(std::size_t criterion, std::size_t element) const;

  /// Looks up an element label such as "gps" across all criteria.
  std::optional<std::pair<std::size_t, std::size_t>> find_element(const std::string& label) const;

  /// Flat (criterion-major) list of all element labels.
  std::vector<std::string> element_labels() const;

 private:
  std::vector<Criterion> criteria_;
  std::vector<Scenario> scenarios_;
};

inline ScenarioCatalog enumerate_scenarios(std::vector<Criterion> criteria) {
  return ScenarioCatalog::enumerate(std::move(criteria));
}

/// Per-participant privacy sensitivity over criteria and their elements.
struct WeightProfile {
  std::string participant_id;
  std::vector<double> criterion_weights;
  std::vector<std::vector<double>> element_weights;

  /// Checks dimensions against the catalog and both normalization constraints.
  void validate(const ScenarioCatalog& catalog) const;

  static WeightProfile uniform(const ScenarioCatalog& catalog, std::string id = "uniform");

  /// Maps Likert answers (1 = very low ... 5 = very high sensitivity) to
  /// weights by normalizing raw scores within the criterion set and within
  /// each criterion's elements.
  static WeightProfile from_likert(std::string id, std::span<const int> criterion_answers,
                                   const std::vector<std::vector<int>>& element_answers);
};

struct Budget {
  double total = 17.5;
  double participation = 2.5;
  double sharing = 15.0;

  /// Builds a budget whose total is participation + sharing.
  static Budget from_parts(double participation, double sharing);
  void validate() const;
};

enum class RewardMode { Linear, Geometric };

const char* to_string(RewardMode mode);
RewardMode reward_mode_from_string(const std::string& text);

/// Data-sharing choices of one participant, one level per scenario.
/// Level 1 shares everything, level `levels` shares nothing.
struct SelectionVector {
  std::vector<int> levels;
  int z = kDefaultLevels;

  void validate() const;
  std::size_t size() const { return levels.size(); }

  static SelectionVector constant(std::size_t m, int level, int z = kDefaultLevels);
};

/// Reward configuration: budget, number of levels and progression.
///
/// Linear rewards allocate the sharing budget; geometric rewards allocate the
/// total budget so that sharing nothing everywhere still earns the
/// participation budget.
struct RewardModel {
  Budget budget;
  int levels = kDefaultLevels;
  RewardMode mode = RewardMode::Geometric;

  double pool() const;
  double reward(double max_reward, int level) const;
};

double scenario_weight(const WeightProfile& profile, const Scenario& scenario);
double total_weight(const WeightProfile& profile, const ScenarioCatalog& catalog);

/// Per-scenario maximum rewards (w_j / W) * pool. Throws DegenerateProfile
/// when the total weight is zero.
std::vector<double> max_rewards(const WeightProfile& profile, const ScenarioCatalog& catalog,
                                double pool);

double linear_rewards(double max_reward, int level, int z);
double geometric_rewards(double max_reward, int level, int z, const Budget& budget);

/// Sum of per-scenario rewards for a whole selection.
double total_rewards(const RewardModel& model, std::span<const double> max_rewards,
                     const SelectionVector& selection);

/// Mean normalized privacy (s - 1) / (z - 1) over all scenarios.
double privacy_score(const SelectionVector& selection);

struct ValuationScheme {
  enum class Kind {
    AbsoluteSharedData,
    AbsoluteSacrificedRewards,
    RelativeSharedData,
    RelativeSacrificedRewards
  };
  Kind kind = Kind::AbsoluteSharedData;
  std::optional<double> intrinsic_rewards;

  bool requires_intrinsic() const {
    return kind == Kind::RelativeSharedData || kind == Kind::RelativeSacrificedRewards;
  }
};

const char* to_string(ValuationScheme::Kind kind);

/// Privacy cost of gained rewards under a valuation scheme; may be negative.
double privacy_cost(double gained_rewards, const ValuationScheme& scheme, double sharing_budget);

}  // namespace privcoord
