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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "doctest.h"
#include "privcoord/collective_learning.hpp"
#include "privcoord/errors.hpp"
#include "privcoord/goal_signals.hpp"
#include "privcoord/random.hpp"

using namespace privcoord;

namespace {

std::vector<PlanPortfolio> random_portfolios(Rng& rng, std::size_t n, std::size_t plans,
                                             std::size_t m) {
  std::vector<PlanPortfolio> out;
  for (std::size_t a = 0; a < n; ++a) {
    PlanPortfolio p;
    p.agent_id = "a" + std::to_string(a);
    for (std::size_t k = 0; k < plans; ++k) {
      Plan plan;
      double sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        plan.values.push_back(rng.uniform());
        sum += plan.values.back();
      }
      plan.local_cost = sum / static_cast<double>(m);
      plan.label = "p" + std::to_string(k);
      p.plans.push_back(std::move(plan));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<double> random_goal(Rng& rng, std::size_t m) {
  std::vector<double> g(m);
  for (double& v : g) v = rng.uniform();
  return g;
}

// Exhaustive minimum over every combination of plans.
double brute_force(const std::vector<PlanPortfolio>& ports, const std::vector<double>& goal,
                   const CostWeights& w) {
  const std::size_t n = ports.size();
  std::vector<std::size_t> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> agg(goal.size(), 0.0);
    std::vector<double> costs;
    for (std::size_t a = 0; a < n; ++a) {
      const auto& plan = ports[a].plans[idx[a]];
      for (std::size_t j = 0; j < goal.size(); ++j) agg[j] += plan.values[j];
      costs.push_back(plan.local_cost);
    }
    best = std::min(best, global_cost(agg, goal, costs, w));
    std::size_t a = 0;
    while (a < n && ++idx[a] == ports[a].plans.size()) idx[a++] = 0;
    if (a == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("tree construction") {
  const auto one = TreeTopology::build(1, 2, 1);
  CHECK(one.size() == 1);
  CHECK_FALSE(one.parent(0).has_value());
  CHECK(one.children(0).empty());

  const auto seven = TreeTopology::build(7, 2, 1);
  CHECK(seven.children(0) == std::vector<std::size_t>{1, 2});
  for (std::size_t p = 3; p < 7; ++p) {
    CHECK(seven.depth(p) == 2);
    CHECK(seven.children(p).empty());
  }
  CHECK(seven.parent(5) == std::optional<std::size_t>(2));

  const auto again = TreeTopology::build(7, 2, 1);
  CHECK(again.order() == seven.order());

  const auto t = TreeTopology::build(84, 3, 9);
  std::set<std::size_t> agents(t.order().begin(), t.order().end());
  CHECK(agents.size() == 84);
  std::size_t min_leaf = 100, max_leaf = 0;
  for (std::size_t p = 0; p < t.size(); ++p) {
    CHECK(t.agent_at(p) < 84);
    CHECK(t.position_of(t.agent_at(p)) == p);
    if (t.children(p).empty()) {
      min_leaf = std::min(min_leaf, t.depth(p));
      max_leaf = std::max(max_leaf, t.depth(p));
    }
  }
  CHECK(max_leaf - min_leaf <= 1);
}

TEST_CASE("global cost degenerate weightings") {
  const std::vector<double> agg = {1, 2, 3};
  const std::vector<double> goal = {2, 1, 3};
  const std::vector<double> costs = {0.2, 0.4, 0.9};
  CHECK(global_cost(agg, goal, costs, {0, 1}) == doctest::Approx(0.5));
  CHECK(global_cost(agg, goal, costs, {0, 0}) == doctest::Approx(standardized_rss(agg, goal)));
  const std::vector<double> same = {0.3, 0.3, 0.3};
  CHECK(global_cost(agg, goal, same, {0.5, 0}) ==
        doctest::Approx(0.5 * standardized_rss(agg, goal)));
  CHECK_THROWS_AS(global_cost(agg, goal, costs, {0.7, 0.6}), InvalidWeights);
  CHECK_THROWS_AS((CostWeights{-0.1, 0.2}.validate()), InvalidWeights);
}

TEST_CASE("cost statistics") {
  CostStats s;
  for (double c : {0.1, 0.4, 0.7}) s.add(c);
  CHECK(s.mean() == doctest::Approx(0.4));
  CHECK(s.variance() == doctest::Approx(0.06));
  CostStats t;
  t.add(0.4);
  s -= t;
  CHECK(s.mean() == doctest::Approx(0.4));
}

TEST_CASE("single agent with selfish weights") {
  Rng rng(1);
  auto ports = random_portfolios(rng, 1, 3, 8);
  ports[0].plans[1].local_cost = 0.01;
  CoordinationOptions o;
  o.iterations = 5;
  o.repetitions = 2;
  const auto runs = coordinate(ports, random_goal(rng, 8), {0, 1}, o);
  for (const auto& r : runs) {
    for (const auto& sel : r.selections) CHECK(sel[0] == 1);
    for (double c : r.cost_trace) CHECK(c == doctest::Approx(0.01));
  }
}

TEST_CASE("two agents reach the exhaustive optimum") {
  Rng rng(2);
  int exact = 0;
  for (int t = 0; t < 50; ++t) {
    const auto ports = random_portfolios(rng, 2, 2, 16);
    const auto goal = random_goal(rng, 16);
    CoordinationOptions o;
    o.repetitions = 1;
    o.iterations = 10;
    o.seed = static_cast<std::uint64_t>(t);
    const auto runs = coordinate(ports, goal, {0, 0}, o);
    exact += runs[0].final_cost() == brute_force(ports, goal, {0, 0});
  }
  CHECK(exact == 50);
}

TEST_CASE("final cost never beats the exhaustive optimum") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 5);
    const auto ports = random_portfolios(rng, n, 3, 12);
    const auto goal = random_goal(rng, 12);
    const CostWeights w{0.2 * (t % 3), 0.1 * (t % 4)};
    CoordinationOptions o;
    o.repetitions = 3;
    o.iterations = 20;
    o.seed = 77;
    const double floor = brute_force(ports, goal, w);
    for (const auto& r : coordinate(ports, goal, w, o)) {
      CHECK(r.final_cost() >= floor - 1e-12);
    }
  }
}

TEST_CASE("trace is non-increasing and response is the sum of selections") {
  Rng rng(4);
  const auto ports = random_portfolios(rng, 21, 3, 10);
  const auto goal = random_goal(rng, 10);
  CoordinationOptions o;
  o.repetitions = 3;
  o.iterations = 15;
  const CostWeights w{0.3, 0.2};
  for (const auto& r : coordinate(ports, goal, w, o)) {
    CHECK(r.cost_trace.size() == 15);
    for (std::size_t t = 1; t < r.cost_trace.size(); ++t) CHECK(r.cost_trace[t] <= r.cost_trace[t - 1]);
    for (std::size_t t = 0; t < r.selections.size(); ++t) {
      std::vector<double> sum(10, 0.0);
      std::vector<double> costs;
      for (std::size_t a = 0; a < ports.size(); ++a) {
        const auto& plan = ports[a].plans[r.selections[t][a]];
        for (std::size_t j = 0; j < 10; ++j) sum[j] += plan.values[j];
        costs.push_back(plan.local_cost);
      }
      for (std::size_t j = 0; j < 10; ++j) CHECK(r.global_response[t][j] == doctest::Approx(sum[j]).epsilon(1e-12));
      CHECK(r.cost_trace[t] == doctest::Approx(global_cost(sum, goal, costs, w)).epsilon(1e-9));
    }
  }
}

TEST_CASE("selfish weights pick each agent's cheapest plan") {
  Rng rng(5);
  const auto ports = random_portfolios(rng, 16, 3, 8);
  CoordinationOptions o;
  o.repetitions = 2;
  o.iterations = 5;
  for (const auto& r : coordinate(ports, random_goal(rng, 8), {0, 1}, o)) {
    for (std::size_t a = 0; a < ports.size(); ++a) {
      const auto& plans = ports[a].plans;
      const auto best = std::min_element(plans.begin(), plans.end(), [](const Plan& x, const Plan& y) {
                          return x.local_cost < y.local_cost;
                        }) - plans.begin();
      CHECK(r.final_selection()[a] == static_cast<std::size_t>(best));
    }
  }
}

TEST_CASE("determinism and input checks") {
  Rng rng(6);
  const auto ports = random_portfolios(rng, 12, 3, 6);
  const auto goal = random_goal(rng, 6);
  CoordinationOptions o;
  o.repetitions = 4;
  o.iterations = 8;
  o.seed = 99;
  const auto a = coordinate(ports, goal, {0, 0}, o);
  const auto b = coordinate(ports, goal, {0, 0}, o);
  for (std::size_t r = 0; r < a.size(); ++r) {
    CHECK(a[r].cost_trace == b[r].cost_trace);
    CHECK(a[r].placement == b[r].placement);
  }

  auto bad = ports;
  bad[3].plans[1].values.pop_back();
  CHECK_THROWS_AS(coordinate(bad, goal, {0, 0}, o), InvalidInput);
  CHECK_THROWS_AS(coordinate(ports, goal, {0.8, 0.8}, o), InvalidWeights);
}

TEST_CASE("early stop ends a flat trace") {
  Rng rng(7);
  const auto ports = random_portfolios(rng, 8, 3, 6);
  CoordinationOptions o;
  o.repetitions = 1;
  o.iterations = 50;
  o.early_stop = true;
  const auto runs = coordinate(ports, random_goal(rng, 6), {0, 0}, o);
  CHECK(runs[0].cost_trace.size() < 50);
}

TEST_CASE("selection summary") {
  Rng rng(8);
  const auto ports = random_portfolios(rng, 10, 3, 6);
  CoordinationOptions o;
  o.repetitions = 10;
  o.iterations = 10;
  const auto runs = coordinate(ports, random_goal(rng, 6), {0, 0}, o);
  const auto s = selection_summary(runs, ports);
  double mean = 0.0;
  for (const auto& r : runs) mean += r.final_cost() / 10.0;
  double var = 0.0;
  for (const auto& r : runs) var += (r.final_cost() - mean) * (r.final_cost() - mean) / 10.0;
  CHECK(s.mean_cost == doctest::Approx(mean).epsilon(1e-12));
  CHECK(s.sd_cost == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
  CHECK(s.final_labels.size() == 10);
  CHECK(s.final_labels[0].size() == 10);

  const std::vector<CoordinationRun> single(runs.begin(), runs.begin() + 1);
  const auto one = selection_summary(single, ports);
  CHECK(one.mean_cost == runs[0].final_cost());
  CHECK(one.sd_cost == 0.0);
  CHECK(one.mean_response == runs[0].final_response());
}
