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

#include "privcoord/collective_learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "privcoord/errors.hpp"
#include "privcoord/goal_signals.hpp"
#include "privcoord/random.hpp"

namespace privcoord {

TreeTopology TreeTopology::build(std::size_t num_agents, std::size_t children_per_node,
                                 std::uint64_t seed) {
  if (num_agents == 0) throw InvalidInput("tree needs at least one agent");
  if (children_per_node == 0) throw InvalidInput("children per node must be at least 1");
  TreeTopology t;
  t.children_per_node_ = children_per_node;
  t.order_.resize(num_agents);
  std::iota(t.order_.begin(), t.order_.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(t.order_);
  t.position_of_.resize(num_agents);
  for (std::size_t p = 0; p < num_agents; ++p) t.position_of_[t.order_[p]] = p;
  return t;
}

std::optional<std::size_t> TreeTopology::parent(std::size_t position) const {
  if (position == 0) return std::nullopt;
  return (position - 1) / children_per_node_;
}

std::vector<std::size_t> TreeTopology::children(std::size_t position) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i <= children_per_node_; ++i) {
    const std::size_t c = children_per_node_ * position + i;
    if (c >= order_.size()) break;
    out.push_back(c);
  }
  return out;
}

std::size_t TreeTopology::depth(std::size_t position) const {
  std::size_t d = 0;
  while (position > 0) {
    position = (position - 1) / children_per_node_;
    ++d;
  }
  return d;
}

void CostWeights::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) {
    throw InvalidWeights("alpha and beta must lie in [0, 1]");
  }
  if (alpha + beta > 1.0 + 1e-12) throw InvalidWeights("alpha + beta must not exceed 1");
}

double CostStats::variance() const {
  if (count <= 0.0) return 0.0;
  const double m = sum / count;
  return std::max(0.0, sum_sq / count - m * m);
}

namespace {

double rss_to(std::span<const double> response, std::span<const double> goal_std) {
  const auto s = standardize(response);
  double rss = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) rss += (s[j] - goal_std[j]) * (s[j] - goal_std[j]);
  return rss;
}

double evaluate(std::span<const double> response, std::span<const double> goal_std,
                const CostStats& stats, const CostWeights& w) {
  const double inefficiency_weight = 1.0 - w.alpha - w.beta;
  double cost = 0.0;
  if (inefficiency_weight != 0.0) cost += inefficiency_weight * rss_to(response, goal_std);
  if (w.alpha != 0.0) cost += w.alpha * stats.variance();
  if (w.beta != 0.0) cost += w.beta * stats.mean();
  return cost;
}

void add_into(std::vector<double>& acc, std::span<const double> v) {
  for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += v[j];
}

std::size_t validate_portfolios(std::span<const PlanPortfolio> portfolios) {
  if (portfolios.empty()) throw InvalidInput("coordinate: no agents");
  std::size_t m = 0;
  for (const auto& p : portfolios) {
    if (p.plans.empty()) {
      throw InvalidInput("coordinate: agent '" + p.agent_id + "' has no plans");
    }
    for (const auto& plan : p.plans) {
      if (m == 0) m = plan.values.size();
      if (plan.values.size() != m || m == 0) {
        throw InvalidInput("coordinate: agent '" + p.agent_id + "' has a plan of length " +
                           std::to_string(plan.values.size()) + ", expected " +
                           std::to_string(m));
      }
    }
  }
  return m;
}

struct Candidate {
  double cost = 0.0;
  std::size_t plan = 0;
  std::size_t mask = 0;  // bit i set: child i's new subtree choice approved
};

CoordinationRun run_repetition(std::span<const PlanPortfolio> portfolios,
                               std::span<const double> goal_std, const CostWeights& weights,
                               const CoordinationOptions& options, std::size_t repetition) {
  const std::size_t n = portfolios.size();
  const std::size_t m = goal_std.size();

  CoordinationRun run;
  run.repetition = repetition;
  run.topology_seed = derive_seed(options.seed, repetition);
  const auto tree = TreeTopology::build(n, options.children_per_node, run.topology_seed);
  run.placement = tree.order();

  // Committed state of the previous iteration, indexed by tree position.
  std::vector<std::size_t> prev_plan(n, 0);
  std::vector<std::vector<double>> prev_agg(n, std::vector<double>(m, 0.0));
  std::vector<CostStats> prev_stats(n);
  bool have_prev = false;

  // Proposals of the current bottom-up pass.
  std::vector<std::size_t> new_plan(n, 0);
  std::vector<std::size_t> new_mask(n, 0);
  std::vector<std::vector<double>> new_agg(n, std::vector<double>(m, 0.0));
  std::vector<CostStats> new_stats(n);

  std::vector<double> base(m);
  std::vector<double> children_sum(m);
  std::vector<double> estimate(m);
  std::size_t flat_iterations = 0;

  for (std::size_t it = 0; it < options.iterations; ++it) {
    double root_cost = 0.0;
    for (std::size_t pos = n; pos-- > 0;) {
      const auto& portfolio = portfolios[tree.agent_at(pos)];
      const auto kids = tree.children(pos);

      // Everything outside this subtree is approximated by last iteration.
      CostStats base_stats;
      if (have_prev) {
        for (std::size_t j = 0; j < m; ++j) base[j] = prev_agg[0][j] - prev_agg[pos][j];
        base_stats = prev_stats[0];
        base_stats -= prev_stats[pos];
      } else {
        std::fill(base.begin(), base.end(), 0.0);
      }

      const std::size_t num_masks = have_prev ? (std::size_t{1} << kids.size()) : 1;
      const std::size_t full_mask = (std::size_t{1} << kids.size()) - 1;
      std::optional<Candidate> best;
      std::vector<double> best_agg;
      CostStats best_stats;

      auto consider = [&](std::size_t mask, std::size_t plan_index) {
        std::fill(children_sum.begin(), children_sum.end(), 0.0);
        CostStats sub;
        for (std::size_t i = 0; i < kids.size(); ++i) {
          const bool approved = (mask >> i) & 1U;
          add_into(children_sum, approved ? new_agg[kids[i]] : prev_agg[kids[i]]);
          sub += approved ? new_stats[kids[i]] : prev_stats[kids[i]];
        }
        const auto& plan = portfolio.plans[plan_index];
        add_into(children_sum, plan.values);
        sub.add(plan.local_cost);
        for (std::size_t j = 0; j < m; ++j) estimate[j] = base[j] + children_sum[j];
        CostStats total = base_stats;
        total += sub;
        const double cost = evaluate(estimate, goal_std, total, weights);
        if (!best || cost < best->cost) {
          best = Candidate{cost, plan_index, mask};
          best_agg = children_sum;
          best_stats = sub;
        }
      };

      // The unchanged configuration is evaluated first so that only strict
      // improvements replace it.
      if (have_prev) consider(0, prev_plan[pos]);
      for (std::size_t k = 0; k < num_masks; ++k) {
        const std::size_t mask = have_prev ? full_mask - k : full_mask;
        for (std::size_t p = 0; p < portfolio.plans.size(); ++p) consider(mask, p);
      }

      new_plan[pos] = best->plan;
      new_mask[pos] = best->mask;
      new_agg[pos] = std::move(best_agg);
      new_stats[pos] = best_stats;
      if (pos == 0) root_cost = best->cost;
    }

    // Top-down: commit approved subtrees, leave rejected ones as they were.
    std::vector<bool> reverted(n, false);
    for (std::size_t pos = 0; pos < n; ++pos) {
      if (pos > 0) {
        const std::size_t parent = *tree.parent(pos);
        const std::size_t slot = (pos - 1) % tree.children_per_node();
        reverted[pos] = reverted[parent] || !((new_mask[parent] >> slot) & 1U);
      }
      if (reverted[pos]) continue;
      prev_plan[pos] = new_plan[pos];
      prev_agg[pos] = new_agg[pos];
      prev_stats[pos] = new_stats[pos];
    }
    have_prev = true;

    std::vector<std::size_t> by_agent(n);
    for (std::size_t pos = 0; pos < n; ++pos) by_agent[tree.agent_at(pos)] = prev_plan[pos];
    const bool flat = !run.cost_trace.empty() && root_cost == run.cost_trace.back();
    run.selections.push_back(std::move(by_agent));
    run.global_response.push_back(prev_agg[0]);
    run.cost_trace.push_back(root_cost);

    flat_iterations = flat ? flat_iterations + 1 : 0;
    if (options.early_stop && flat_iterations >= options.early_stop_window) break;
  }
  return run;
}

}  // namespace

double global_cost(std::span<const double> aggregate, std::span<const double> goal,
                   std::span<const double> selected_costs, const CostWeights& weights) {
  weights.validate();
  if (aggregate.size() != goal.size()) throw InvalidInput("global_cost: length mismatch");
  if (selected_costs.empty()) throw InvalidInput("global_cost: no selected plans");
  CostStats stats;
  for (double c : selected_costs) stats.add(c);
  const auto goal_std = standardize(goal);
  return evaluate(aggregate, goal_std, stats, weights);
}

std::vector<CoordinationRun> coordinate(std::span<const PlanPortfolio> portfolios,
                                        std::span<const double> goal, const CostWeights& weights,
                                        const CoordinationOptions& options) {
  weights.validate();
  const std::size_t m = validate_portfolios(portfolios);
  if (goal.size() != m) {
    throw InvalidInput("coordinate: goal has " + std::to_string(goal.size()) +
                       " values, plans have " + std::to_string(m));
  }
  if (options.iterations == 0 || options.repetitions == 0) {
    throw InvalidInput("coordinate: iterations and repetitions must be positive");
  }
  const auto goal_std = standardize(goal);
  std::vector<CoordinationRun> runs;
  runs.reserve(options.repetitions);
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    runs.push_back(run_repetition(portfolios, goal_std, weights, options, r));
  }
  return runs;
}

SelectionSummary selection_summary(std::span<const CoordinationRun> runs,
                                   std::span<const PlanPortfolio> portfolios) {
  if (runs.empty()) throw InvalidInput("selection_summary: no runs");
  SelectionSummary s;
  const std::size_t n = portfolios.size();
  const std::size_t m = runs.front().final_response().size();
  s.final_labels.assign(n, {});
  s.mean_response.assign(m, 0.0);
  for (const auto& run : runs) {
    const auto& sel = run.final_selection();
    if (sel.size() != n) throw InvalidInput("selection_summary: run and portfolio sizes differ");
    for (std::size_t a = 0; a < n; ++a) {
      s.final_labels[a].push_back(portfolios[a].plans.at(sel[a]).label);
    }
    add_into(s.mean_response, run.final_response());
    s.final_costs.push_back(run.final_cost());
  }
  const double r = static_cast<double>(runs.size());
  for (double& v : s.mean_response) v /= r;
  s.mean_cost = std::accumulate(s.final_costs.begin(), s.final_costs.end(), 0.0) / r;
  double var = 0.0;
  for (double c : s.final_costs) var += (c - s.mean_cost) * (c - s.mean_cost);
  s.sd_cost = std::sqrt(var / r);
  return s;
}

}  // namespace privcoord
