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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace privcoord {

/// A candidate data-sharing plan: normalized sharing level per scenario and
/// the plan's local privacy cost.
struct Plan {
  std::vector<double> values;
  double local_cost = 0.0;
  std::string label;
};

struct PlanPortfolio {
  std::string agent_id;
  std::vector<Plan> plans;
};

/// Balanced tree over a seeded permutation of the agents.
///
/// Positions are laid out breadth-first: the children of position p are
/// c*p + 1 ... c*p + c, so a node's index is always smaller than its
/// children's and depths differ by at most one between leaves.
class TreeTopology {
 public:
  static TreeTopology build(std::size_t num_agents, std::size_t children_per_node,
                            std::uint64_t seed);

  std::size_t size() const { return order_.size(); }
  std::size_t children_per_node() const { return children_per_node_; }

  /// Agent placed at a position.
  std::size_t agent_at(std::size_t position) const { return order_[position]; }
  std::size_t position_of(std::size_t agent) const { return position_of_[agent]; }
  const std::vector<std::size_t>& order() const { return order_; }

  std::optional<std::size_t> parent(std::size_t position) const;
  std::vector<std::size_t> children(std::size_t position) const;
  std::size_t depth(std::size_t position) const;

 private:
  std::size_t children_per_node_ = 2;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_of_;
};

/// Weights of the collective cost
///   (1 - alpha - beta) * inefficiency + alpha * unfairness + beta * mean cost.
struct CostWeights {
  double alpha = 0.0;
  double beta = 0.0;

  /// Throws InvalidWeights unless both lie in [0, 1] and alpha + beta <= 1.
  void validate() const;
};

/// Running (count, sum, sum of squares) of local costs. This is all that
/// travels up the tree, so no agent discloses its individual cost.
struct CostStats {
  double count = 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double cost) {
    count += 1.0;
    sum += cost;
    sum_sq += cost * cost;
  }
  CostStats& operator+=(const CostStats& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }
  CostStats& operator-=(const CostStats& o) {
    count -= o.count;
    sum -= o.sum;
    sum_sq -= o.sum_sq;
    return *this;
  }
  double mean() const { return count > 0.0 ? sum / count : 0.0; }
  /// Population variance, clamped at zero against cancellation.
  double variance() const;
};

/// Collective cost of an aggregate response and the selected local costs.
double global_cost(std::span<const double> aggregate, std::span<const double> goal,
                   std::span<const double> selected_costs, const CostWeights& weights);

struct CoordinationOptions {
  std::size_t iterations = 50;
  std::size_t repetitions = 10;
  std::uint64_t seed = 0;
  std::size_t children_per_node = 2;
  bool early_stop = false;
  std::size_t early_stop_window = 5;
};

/// One repetition: a fresh random placement followed by the learning iterations.
struct CoordinationRun {
  std::size_t repetition = 0;
  std::uint64_t topology_seed = 0;
  std::vector<std::size_t> placement;                // agent at each tree position
  std::vector<std::vector<std::size_t>> selections;  // [iteration][agent] plan index
  std::vector<std::vector<double>> global_response;  // [iteration][scenario]
  std::vector<double> cost_trace;

  const std::vector<std::size_t>& final_selection() const { return selections.back(); }
  const std::vector<double>& final_response() const { return global_response.back(); }
  double final_cost() const { return cost_trace.back(); }
};

/// Tree-structured collective learning over the agents' plan portfolios.
///
/// Every iteration runs a bottom-up pass, in which each agent picks the plan
/// and the subset of its children's new subtree choices that minimize the
/// estimated collective cost, followed by a top-down pass that commits the
/// approved choices and reverts rejected subtrees. The previous
/// configuration is always among the root's candidates, so the cost trace
/// never increases.
std::vector<CoordinationRun> coordinate(std::span<const PlanPortfolio> portfolios,
                                        std::span<const double> goal, const CostWeights& weights,
                                        const CoordinationOptions& options);

struct SelectionSummary {
  std::vector<std::vector<std::string>> final_labels;  // [agent][repetition]
  std::vector<double> mean_response;
  std::vector<double> final_costs;
  double mean_cost = 0.0;
  double sd_cost = 0.0;  // population standard deviation over repetitions
};

SelectionSummary selection_summary(std::span<const CoordinationRun> runs,
                                   std::span<const PlanPortfolio> portfolios);

}  // namespace privcoord
