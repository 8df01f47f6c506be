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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "privcoord/errors.hpp"
#include "privcoord/metrics.hpp"

using namespace privcoord;

namespace {

const ScenarioCatalog& catalog() {
  static const auto cat = ScenarioCatalog::default_catalog();
  return cat;
}

}  // namespace

TEST_CASE("scenario privacy") {
  std::vector<SelectionVector> none(3, SelectionVector::constant(64, 5));
  for (double p : scenario_privacy(ConditionSnapshot::from_selections("x", none))) CHECK(p == 1.0);
  std::vector<SelectionVector> split = {SelectionVector::constant(64, 1), SelectionVector::constant(64, 5)};
  for (double p : scenario_privacy(ConditionSnapshot::from_selections("x", split))) CHECK(p == 0.5);
  CHECK_THROWS_AS(scenario_privacy(ConditionSnapshot{}), InvalidInput);

  Rng rng(3);
  std::vector<SelectionVector> pop;
  for (int i = 0; i < 9; ++i) pop.push_back(testing_helpers::random_selection(rng, 64, 5));
  const auto p = scenario_privacy(ConditionSnapshot::from_selections("x", pop));
  for (std::size_t j = 0; j < 64; ++j) {
    double sum = 0.0;
    for (const auto& s : pop) sum += (s.levels[j] - 1) / 4.0;
    CHECK(std::abs(p[j] - sum / 9) < 1e-12);
  }
}

TEST_CASE("uniform privacy has no reinforcement") {
  const std::vector<double> p(64, 0.5);
  const auto r = reinforcement(p, catalog());
  for (std::size_t u = 0; u < 3; ++u) {
    for (std::size_t o = 0; o < 4; ++o) {
      CHECK(r.actual[u][o] == doctest::Approx(0.5));
      CHECK(r.expected[u][o] == doctest::Approx(0.5));
      REQUIRE(r.reinforcement[u][o].has_value());
      CHECK(*r.reinforcement[u][o] == doctest::Approx(0.0));
    }
  }
}

TEST_CASE("element whose scenarios are fully private exceeds its expectation") {
  std::vector<double> p(64, 0.0);
  const auto gps = catalog().find_element("gps");
  for (std::size_t id : catalog().scenarios_with(gps->first, gps->second)) p[id - 1] = 1.0;
  const auto r = reinforcement(p, catalog());
  CHECK(r.actual[0][3] == 1.0);
  // Expected mixes in the collector and context means (0.25 each).
  CHECK(r.expected[0][3] == doctest::Approx(0.5));
  CHECK(*r.reinforcement[0][3] > 0.0);
  // Other sensors have zero expectation from their own mean but pick up 0.25 from shared elements.
  CHECK(r.actual[0][0] == 0.0);
}

TEST_CASE("zero expectation is flagged") {
  const std::vector<double> p(64, 0.0);
  const auto r = reinforcement(p, catalog());
  CHECK_FALSE(r.reinforcement[1][2].has_value());
}

TEST_CASE("swapping two elements swaps their reports") {
  Rng rng(5);
  std::vector<double> p(64);
  for (double& v : p) v = rng.uniform();
  std::vector<double> q(64);
  for (const auto& s : catalog().scenarios()) {
    auto e = s.elements;
    if (e[0] == 0) e[0] = 1; else if (e[0] == 1) e[0] = 0;
    const std::size_t id = 1 + e[0] * 16 + e[1] * 4 + e[2];
    q[id - 1] = p[s.id - 1];
  }
  const auto a = reinforcement(p, catalog());
  const auto b = reinforcement(q, catalog());
  CHECK(a.actual[0][0] == doctest::Approx(b.actual[0][1]));
  CHECK(a.expected[0][1] == doctest::Approx(b.expected[0][0]));
}

TEST_CASE("element privacy is a convex combination") {
  Rng rng(6);
  std::vector<double> p(64);
  for (double& v : p) v = rng.uniform();
  const double lo = *std::min_element(p.begin(), p.end());
  const double hi = *std::max_element(p.begin(), p.end());
  for (const auto& row : element_privacy(p, catalog())) {
    for (double v : row) {
      CHECK(v >= lo);
      CHECK(v <= hi);
    }
  }
  CHECK_THROWS_AS(element_privacy(std::vector<double>(3, 0.0), catalog()), InvalidInput);
}

TEST_CASE("collection cost") {
  const RewardModel linear{Budget{}, 5, RewardMode::Linear};
  const std::vector<WeightProfile> profiles(4, WeightProfile::uniform(catalog()));
  const std::vector<SelectionVector> none(4, SelectionVector::constant(64, 5));
  const std::vector<SelectionVector> all(4, SelectionVector::constant(64, 1));
  CHECK(collection_cost(none, profiles, catalog(), linear) == doctest::Approx(0.0));
  CHECK(collection_cost(all, profiles, catalog(), linear) == doctest::Approx(60.0));
  const std::vector<WeightProfile> three(3, WeightProfile::uniform(catalog()));
  CHECK_THROWS_AS(collection_cost(all, three, catalog(), linear), InvalidInput);
}

TEST_CASE("sharing more never lowers the cost") {
  Rng rng(7);
  const RewardModel model{Budget{}, 5, RewardMode::Geometric};
  for (int t = 0; t < 20; ++t) {
    std::vector<WeightProfile> profiles = {testing_helpers::random_profile(rng, catalog())};
    std::vector<SelectionVector> sel = {testing_helpers::random_selection(rng, 64, 5)};
    const double before = collection_cost(sel, profiles, catalog(), model);
    auto& s = sel[0].levels[rng.uniform_index(64)];
    if (s > 1) --s;
    CHECK(collection_cost(sel, profiles, catalog(), model) >= before);
  }
}

TEST_CASE("coordinated cost prices plans by their own condition") {
  std::vector<PlanPortfolio> ports(2);
  for (auto& p : ports) {
    p.plans = {Plan{{0.0}, 0.0, "intrinsic"}, Plan{{1.0}, 1.0, "rewarded1"}};
  }
  CoordinationRun run;
  run.selections = {{0, 1}};
  run.global_response = {{1.0}};
  run.cost_trace = {0.0};
  const std::vector<CoordinationRun> runs = {run, run};
  const std::vector<std::vector<double>> rewards = {{3.0, 10.0}, {4.0, 12.0}};
  const auto with = coordinated_collection_cost(runs, ports, rewards, true);
  const auto free = coordinated_collection_cost(runs, ports, rewards, false);
  CHECK(with.mean == 15.0);
  CHECK(with.sd == 0.0);
  CHECK(free.mean == 12.0);

  const auto snap = ConditionSnapshot::from_runs("c", runs, ports);
  CHECK(snap.privacy[0][0] == 1.0);
  CHECK(snap.privacy[1][0] == 0.0);
}

TEST_CASE("privacy recovery") {
  CHECK(*privacy_recovery(0.3, 0.6, 0.6) == doctest::Approx(100.0));
  CHECK(*privacy_recovery(0.3, 0.3, 0.6) == doctest::Approx(0.0));
  CHECK_FALSE(privacy_recovery(0.5, 0.4, 0.5).has_value());
  // Invariant to a common affine rescaling.
  CHECK(*privacy_recovery(0.3, 0.5, 0.6) == doctest::Approx(*privacy_recovery(2 * 0.3 + 1, 2 * 0.5 + 1, 2 * 0.6 + 1)));

  std::vector<SelectionVector> a(2, SelectionVector::constant(64, 3));
  std::vector<SelectionVector> b(3, SelectionVector::constant(64, 3));
  CHECK_THROWS_AS(privacy_recovery(ConditionSnapshot::from_selections("r", a),
                                   ConditionSnapshot::from_selections("c", a),
                                   ConditionSnapshot::from_selections("i", b)),
                  InvalidInput);
}
