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

#include "privcoord/population.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "privcoord/errors.hpp"
#include "privcoord/random.hpp"

namespace privcoord {

const char* to_string(GroupKind kind) {
  switch (kind) {
    case GroupKind::PrivacyIgnorant:
      return "privacy_ignorant";
    case GroupKind::PrivacyNeutral:
      return "privacy_neutral";
    case GroupKind::PrivacyPreserver:
      return "privacy_preserver";
    case GroupKind::RewardSeeker:
      return "reward_seeker";
    case GroupKind::RewardOpportunist:
      return "reward_opportunist";
  }
  return "unknown";
}

GroupKind group_from_string(const std::string& text) {
  for (auto g : kAllGroups) {
    if (text == to_string(g)) return g;
  }
  throw InvalidInput("unknown group '" + text + "'");
}

const char* to_string(Condition condition) {
  switch (condition) {
    case Condition::Intrinsic:
      return "intrinsic";
    case Condition::Rewarded1:
      return "rewarded1";
    case Condition::Rewarded2:
      return "rewarded2";
  }
  return "unknown";
}

Condition condition_from_string(const std::string& text) {
  for (auto c : kAllConditions) {
    if (text == to_string(c)) return c;
  }
  throw InvalidInput("unknown condition '" + text + "'");
}

std::vector<double> centered_policy(double center, double spread, int z) {
  if (z < 2) throw InvalidInput("centered_policy: z must be at least 2");
  if (!(spread > 0.0)) throw InvalidInput("centered_policy: spread must be positive");
  std::vector<double> p(static_cast<std::size_t>(z));
  double sum = 0.0;
  for (int l = 1; l <= z; ++l) {
    const double d = (l - center) / spread;
    p[l - 1] = std::exp(-0.5 * d * d);
    sum += p[l - 1];
  }
  for (double& v : p) v /= sum;
  return p;
}

void GroupBehavior::validate(int z) const {
  auto check = [&](const std::vector<double>& p, const char* what) {
    if (p.size() != static_cast<std::size_t>(z)) {
      throw InvalidInput(std::string(to_string(kind)) + ": " + what + " policy needs z entries");
    }
    double sum = 0.0;
    for (double v : p) {
      if (v < 0.0) throw InvalidInput(std::string(to_string(kind)) + ": negative probability");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kTolerance) {
      throw InvalidInput(std::string(to_string(kind)) + ": " + what + " policy must sum to 1");
    }
  };
  check(intrinsic_policy, "intrinsic");
  check(rewarded_policy, "rewarded");
  if (!(drift >= -1.0)) throw InvalidInput("drift must be at least -1");
}

GroupBehavior GroupBehavior::defaults(GroupKind kind, int z) {
  const double low_sharing = z;
  const double moderate = (1.0 + z) / 2.0;
  const double high_sharing = 1.0;
  auto make = [&](double intrinsic, double rewarded, double drift) {
    return GroupBehavior{kind, centered_policy(intrinsic, 1.0, z),
                         centered_policy(rewarded, 1.0, z), drift};
  };
  // Drifts are the relative privacy changes observed while reassessing.
  switch (kind) {
    case GroupKind::PrivacyIgnorant:
      return make(high_sharing, high_sharing, -0.648);
    case GroupKind::PrivacyNeutral:
      return make(moderate, moderate, 0.081);
    case GroupKind::PrivacyPreserver:
      return make(low_sharing, low_sharing, 0.087);
    case GroupKind::RewardSeeker:
      return make(moderate, high_sharing, -0.557);
    case GroupKind::RewardOpportunist:
      return make(low_sharing, high_sharing, -0.309);
  }
  throw InvalidInput("unknown group kind");
}

GroupMix GroupMix::standard() {
  GroupMix mix;
  mix.fractions = {0.167, 0.5714 / 2, 0.262 / 2, 0.5714 / 2, 0.262 / 2};
  return mix;
}

std::array<double, kNumGroups> GroupMix::normalized() const {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw InvalidInput("group mix: negative fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-3) throw InvalidInput("group mix: fractions must sum to 1");
  auto out = fractions;
  for (double& f : out) f /= sum;
  return out;
}

std::vector<std::size_t> largest_remainder_counts(std::size_t n,
                                                  std::span<const double> fractions) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw InvalidInput("largest_remainder_counts: negative fraction");
    sum += f;
  }
  if (!(sum > 0.0)) throw InvalidInput("largest_remainder_counts: fractions sum to zero");
  std::vector<std::size_t> counts(fractions.size());
  std::vector<double> remainders(fractions.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = static_cast<double>(n) * fractions[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainders[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[order[i % order.size()]];
  return counts;
}

std::array<GroupBehavior, kNumGroups> PopulationSpec::default_behaviors(int z) {
  std::array<GroupBehavior, kNumGroups> b;
  for (std::size_t g = 0; g < kNumGroups; ++g) b[g] = GroupBehavior::defaults(kAllGroups[g], z);
  return b;
}

namespace {

// Perceived sensitivity of the default design: GPS and noise above the
// other sensors, corporations and social networking as the most intrusive
// collector and context.
std::vector<int> default_criterion_centers(const ScenarioCatalog& catalog) {
  if (catalog.num_criteria() == 3) return {3, 4, 3};
  return std::vector<int>(catalog.num_criteria(), 3);
}

std::vector<std::vector<int>> default_element_centers(const ScenarioCatalog& catalog) {
  const auto defaults = ScenarioCatalog::default_catalog();
  std::vector<std::vector<int>> centers;
  if (catalog.element_labels() == defaults.element_labels()) {
    return {{2, 2, 4, 4}, {4, 3, 3, 2}, {4, 2, 3, 3}};
  }
  for (const auto& c : catalog.criteria()) centers.emplace_back(c.elements.size(), 3);
  return centers;
}

int jitter(int center, Rng& rng) {
  const int offset = static_cast<int>(rng.uniform_index(3)) - 1;
  return std::clamp(center + offset, 1, 5);
}

// Tilts a policy toward privacy on scenarios the participant finds more
// sensitive than average.
std::vector<double> tilt(std::span<const double> policy, double relative_sensitivity,
                         double strength) {
  const std::size_t z = policy.size();
  std::vector<double> out(z);
  double sum = 0.0;
  for (std::size_t l = 0; l < z; ++l) {
    const double privacy = static_cast<double>(l) / static_cast<double>(z - 1);
    out[l] = policy[l] * std::exp(strength * relative_sensitivity * privacy);
    sum += out[l];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> relative_sensitivity(const WeightProfile& profile,
                                         const ScenarioCatalog& catalog) {
  std::vector<double> w;
  double mean = 0.0;
  for (const auto& s : catalog.scenarios()) {
    w.push_back(scenario_weight(profile, s));
    mean += w.back();
  }
  mean /= static_cast<double>(w.size());
  for (double& x : w) x = mean > 0.0 ? (x - mean) / mean : 0.0;
  return w;
}

}  // namespace

SyntheticPopulation generate_population(const PopulationSpec& spec,
                                        const ScenarioCatalog& catalog) {
  if (spec.n == 0) throw InvalidInput("generate_population: n must be at least 1");
  for (const auto& b : spec.behaviors) b.validate(spec.z);

  SyntheticPopulation pop;
  pop.mix = spec.mix.normalized();
  pop.z = spec.z;
  pop.behaviors = spec.behaviors;

  const auto criterion_centers =
      spec.criterion_centers.empty() ? default_criterion_centers(catalog) : spec.criterion_centers;
  const auto element_centers =
      spec.element_centers.empty() ? default_element_centers(catalog) : spec.element_centers;
  if (criterion_centers.size() != catalog.num_criteria() ||
      element_centers.size() != catalog.num_criteria()) {
    throw InvalidInput("generate_population: Likert centers do not match the catalog");
  }

  const auto counts = largest_remainder_counts(spec.n, pop.mix);
  std::vector<GroupKind> groups;
  for (std::size_t g = 0; g < kNumGroups; ++g) groups.insert(groups.end(), counts[g], kAllGroups[g]);

  Rng rng(spec.seed);
  rng.shuffle(groups);
  for (std::size_t i = 0; i < spec.n; ++i) {
    SyntheticParticipant p;
    p.group = groups[i];
    p.seed = derive_seed(spec.seed, i + 1);
    Rng answers(derive_seed(p.seed, 0));
    std::vector<int> crit;
    for (int c : criterion_centers) crit.push_back(jitter(c, answers));
    std::vector<std::vector<int>> elems;
    for (std::size_t u = 0; u < element_centers.size(); ++u) {
      if (element_centers[u].size() != catalog.criteria()[u].elements.size()) {
        throw InvalidInput("generate_population: element centers do not match the catalog");
      }
      std::vector<int> row;
      for (int c : element_centers[u]) row.push_back(jitter(c, answers));
      elems.push_back(std::move(row));
    }
    char id[32];
    std::snprintf(id, sizeof id, "P%03zu", i + 1);
    p.profile = WeightProfile::from_likert(id, crit, elems);
    pop.participants.push_back(std::move(p));
  }
  return pop;
}

ConditionResult simulate_condition(const SyntheticParticipant& participant,
                                   const GroupBehavior& behavior, Condition condition,
                                   const ScenarioCatalog& catalog,
                                   const SimulationSettings& settings) {
  const RewardModel& model = settings.reward_model;
  const int z = model.levels;
  behavior.validate(z);
  const std::size_t m = catalog.size();
  const auto rel = relative_sensitivity(participant.profile, catalog);
  Rng rng(derive_seed(participant.seed, 1 + static_cast<std::uint64_t>(condition)));

  ConditionResult result;
  const auto& policy =
      condition == Condition::Intrinsic ? behavior.intrinsic_policy : behavior.rewarded_policy;
  std::vector<int> first(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto p = tilt(policy, rel[j], settings.sensitivity);
    first[j] = static_cast<int>(rng.discrete(p)) + 1;
  }

  if (condition == Condition::Intrinsic) {
    result.selection = SelectionVector{first, z};
    const double privacy = privacy_score(result.selection);
    for (std::size_t j = 0; j < m; ++j) {
      result.events.push_back(
          ChoiceEvent{participant.profile.participant_id, j + 1, "intrinsic", j + 1, first[j], 0.0,
                      privacy});
    }
    return result;
  }

  if (settings.steps < m) {
    throw InvalidInput("simulate_condition: rewarded conditions need at least m steps");
  }
  RetrievalEngine engine(max_rewards(participant.profile, catalog, model.pool()), model);
  // Nothing is shared before the first answer of the day.
  auto state = engine.make_state(SelectionVector::constant(m, z, z));
  std::size_t step = 0;
  for (std::size_t j = 0; j < m; ++j) {
    state = engine.apply_choice(state, j + 1, first[j]);
    result.events.push_back(ChoiceEvent{participant.profile.participant_id, ++step, "first_pass",
                                        j + 1, first[j], state.accumulated_rewards,
                                        state.privacy});
  }

  const double target = std::clamp(state.privacy * (1.0 + behavior.drift), 0.0, 1.0);
  const double half_step = 0.5 / (static_cast<double>(z - 1) * static_cast<double>(m));
  while (step < settings.steps) {
    if (std::abs(state.privacy - target) <= half_step) break;
    const Goal goal = state.privacy < target ? Goal::ImprovePrivacy : Goal::ImproveRewards;
    const auto scenario = engine.retrieve_next(state, goal);
    if (!scenario) break;
    const auto box = engine.improvement_box(state, *scenario, goal);
    const int current = state.selection.levels[*scenario - 1];
    int choice = box.front();
    double best = INFINITY;
    for (int o : box) {
      const double after = state.privacy + (o - current) * 2.0 * half_step;
      const double gap = std::abs(after - target);
      if (gap < best - 1e-15 ||
          (std::abs(gap - best) <= 1e-15 && std::abs(o - current) < std::abs(choice - current))) {
        best = gap;
        choice = o;
      }
    }
    state = engine.apply_choice(state, *scenario, choice);
    result.events.push_back(ChoiceEvent{participant.profile.participant_id, ++step,
                                        to_string(goal), *scenario, choice,
                                        state.accumulated_rewards, state.privacy});
  }
  result.selection = state.selection;
  return result;
}

const SelectionVector& ParticipantRecord::at(Condition c) const {
  const auto& s = conditions[static_cast<std::size_t>(c)];
  if (!s) {
    throw IncompletePortfolio("participant '" + id + "' has no " + to_string(c) + " choices");
  }
  return *s;
}

Plan plan_from_selection(const SelectionVector& selection, std::string label) {
  selection.validate();
  Plan plan;
  plan.label = std::move(label);
  plan.values.reserve(selection.size());
  double sum = 0.0;
  for (int s : selection.levels) {
    plan.values.push_back(static_cast<double>(selection.z - s) /
                          static_cast<double>(selection.z - 1));
    sum += plan.values.back();
  }
  plan.local_cost = selection.size() > 0 ? sum / static_cast<double>(selection.size()) : 0.0;
  return plan;
}

PlanPortfolio build_portfolio(const ParticipantRecord& record) {
  PlanPortfolio portfolio;
  portfolio.agent_id = record.id;
  for (auto c : kAllConditions) portfolio.plans.push_back(plan_from_selection(record.at(c), to_string(c)));
  return portfolio;
}

std::vector<PlanPortfolio> build_portfolios(std::span<const ParticipantRecord> records) {
  std::vector<PlanPortfolio> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(build_portfolio(r));
  return out;
}

KMeansResult extract_groups(const std::vector<Point>& points, std::size_t k, std::uint64_t seed) {
  return kmeans(points, k, seed);
}

}  // namespace privcoord
