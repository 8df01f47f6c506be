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

#include "privcoord/metrics.hpp"

#include <cmath>

#include "privcoord/errors.hpp"

namespace privcoord {

namespace {

void check_length(std::span<const double> p, const ScenarioCatalog& catalog) {
  if (p.size() != catalog.size()) {
    throw InvalidInput("scenario privacy has " + std::to_string(p.size()) +
                       " values, catalog has " + std::to_string(catalog.size()));
  }
}

std::vector<std::vector<double>> per_element_mean(std::span<const double> values,
                                                  const ScenarioCatalog& catalog) {
  std::vector<std::vector<double>> out;
  for (std::size_t u = 0; u < catalog.num_criteria(); ++u) {
    std::vector<double> row;
    for (std::size_t o = 0; o < catalog.criteria()[u].elements.size(); ++o) {
      const auto ids = catalog.scenarios_with(u, o);
      double sum = 0.0;
      for (std::size_t id : ids) sum += values[id - 1];
      row.push_back(ids.empty() ? 0.0 : sum / static_cast<double>(ids.size()));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

ConditionSnapshot ConditionSnapshot::from_selections(std::string label,
                                                     std::span<const SelectionVector> selections) {
  ConditionSnapshot s;
  s.label = std::move(label);
  for (const auto& sel : selections) {
    sel.validate();
    std::vector<double> row;
    row.reserve(sel.size());
    for (int level : sel.levels) {
      row.push_back(static_cast<double>(level - 1) / static_cast<double>(sel.z - 1));
    }
    s.privacy.push_back(std::move(row));
  }
  return s;
}

ConditionSnapshot ConditionSnapshot::from_runs(std::string label,
                                               std::span<const CoordinationRun> runs,
                                               std::span<const PlanPortfolio> portfolios) {
  if (runs.empty()) throw InvalidInput("coordinated snapshot: no runs");
  ConditionSnapshot s;
  s.label = std::move(label);
  const double reps = static_cast<double>(runs.size());
  for (std::size_t a = 0; a < portfolios.size(); ++a) {
    const std::size_t m = portfolios[a].plans.front().values.size();
    std::vector<double> row(m, 0.0);
    for (const auto& run : runs) {
      const auto& plan = portfolios[a].plans.at(run.final_selection().at(a));
      for (std::size_t j = 0; j < m; ++j) row[j] += (1.0 - plan.values[j]) / reps;
    }
    s.privacy.push_back(std::move(row));
  }
  return s;
}

std::vector<double> scenario_privacy(const ConditionSnapshot& snapshot) {
  if (snapshot.privacy.empty()) throw InvalidInput("scenario_privacy: empty snapshot");
  const std::size_t m = snapshot.privacy.front().size();
  std::vector<double> p(m, 0.0);
  for (const auto& row : snapshot.privacy) {
    if (row.size() != m) throw InvalidInput("scenario_privacy: ragged snapshot");
    for (std::size_t j = 0; j < m; ++j) p[j] += row[j];
  }
  for (double& v : p) v /= static_cast<double>(snapshot.privacy.size());
  return p;
}

std::vector<std::vector<double>> element_privacy(std::span<const double> scenario_privacy,
                                                 const ScenarioCatalog& catalog) {
  check_length(scenario_privacy, catalog);
  return per_element_mean(scenario_privacy, catalog);
}

std::vector<double> expected_scenario_privacy(std::span<const double> scenario_privacy,
                                              const ScenarioCatalog& catalog) {
  const auto elements = element_privacy(scenario_privacy, catalog);
  std::vector<double> expected;
  expected.reserve(catalog.size());
  for (const auto& s : catalog.scenarios()) {
    double sum = 0.0;
    for (std::size_t u = 0; u < s.elements.size(); ++u) sum += elements[u][s.elements[u]];
    expected.push_back(sum / static_cast<double>(s.elements.size()));
  }
  return expected;
}

std::vector<std::vector<double>> expected_element_privacy(std::span<const double> scenario_privacy,
                                                          const ScenarioCatalog& catalog) {
  const auto expected = expected_scenario_privacy(scenario_privacy, catalog);
  return per_element_mean(expected, catalog);
}

ReinforcementReport reinforcement(std::span<const double> scenario_privacy,
                                  const ScenarioCatalog& catalog) {
  ReinforcementReport r;
  r.actual = element_privacy(scenario_privacy, catalog);
  r.expected = expected_element_privacy(scenario_privacy, catalog);
  for (std::size_t u = 0; u < r.actual.size(); ++u) {
    std::vector<std::optional<double>> row;
    for (std::size_t o = 0; o < r.actual[u].size(); ++o) {
      const double e = r.expected[u][o];
      if (e > 0.0) {
        row.emplace_back((r.actual[u][o] - e) / e);
      } else {
        row.emplace_back(std::nullopt);
      }
    }
    r.reinforcement.push_back(std::move(row));
  }
  return r;
}

double participant_rewards(const SelectionVector& selection, const WeightProfile& profile,
                           const ScenarioCatalog& catalog, const RewardModel& model) {
  const auto rmax = max_rewards(profile, catalog, model.pool());
  return total_rewards(model, rmax, selection);
}

double collection_cost(std::span<const SelectionVector> selections,
                       std::span<const WeightProfile> profiles, const ScenarioCatalog& catalog,
                       const RewardModel& model) {
  if (profiles.size() != selections.size()) {
    throw InvalidInput("collection_cost: " + std::to_string(selections.size()) +
                       " selections but " + std::to_string(profiles.size()) + " profiles");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < selections.size(); ++i) {
    total += participant_rewards(selections[i], profiles[i], catalog, model);
  }
  return total;
}

CoordinatedCost coordinated_collection_cost(std::span<const CoordinationRun> runs,
                                            std::span<const PlanPortfolio> portfolios,
                                            const std::vector<std::vector<double>>& plan_rewards,
                                            bool include_intrinsic) {
  if (plan_rewards.size() != portfolios.size()) {
    throw InvalidInput("coordinated_collection_cost: missing rewards for some agents");
  }
  CoordinatedCost c;
  for (const auto& run : runs) {
    double total = 0.0;
    const auto& sel = run.final_selection();
    for (std::size_t a = 0; a < portfolios.size(); ++a) {
      const std::size_t k = sel.at(a);
      if (!include_intrinsic && portfolios[a].plans.at(k).label == "intrinsic") continue;
      total += plan_rewards[a].at(k);
    }
    c.per_repetition.push_back(total);
  }
  if (c.per_repetition.empty()) return c;
  double sum = 0.0;
  for (double v : c.per_repetition) sum += v;
  c.mean = sum / static_cast<double>(c.per_repetition.size());
  double ss = 0.0;
  for (double v : c.per_repetition) ss += (v - c.mean) * (v - c.mean);
  c.sd = std::sqrt(ss / static_cast<double>(c.per_repetition.size()));
  return c;
}

double mean_privacy(const ConditionSnapshot& snapshot) {
  const auto p = scenario_privacy(snapshot);
  double sum = 0.0;
  for (double v : p) sum += v;
  return p.empty() ? 0.0 : sum / static_cast<double>(p.size());
}

std::optional<double> privacy_recovery(double rewarded, double coordinated, double intrinsic) {
  const double loss = intrinsic - rewarded;
  if (std::abs(loss) < 1e-9) return std::nullopt;
  return 100.0 * (coordinated - rewarded) / loss;
}

std::optional<double> privacy_recovery(const ConditionSnapshot& rewarded,
                                       const ConditionSnapshot& coordinated,
                                       const ConditionSnapshot& intrinsic) {
  if (rewarded.participants() != coordinated.participants() ||
      rewarded.participants() != intrinsic.participants()) {
    throw InvalidInput("privacy_recovery: snapshots cover different populations");
  }
  return privacy_recovery(mean_privacy(rewarded), mean_privacy(coordinated),
                          mean_privacy(intrinsic));
}

}  // namespace privcoord
