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

#include "privcoord/goal_signals.hpp"

#include <cmath>

#include "privcoord/errors.hpp"

namespace privcoord {

// Standard deviations below this are treated as a constant signal.
static constexpr double kZeroVariance = 1e-12;

std::vector<GoalSignal> build_goal_signals(std::span<const SelectionVector> intrinsic) {
  if (intrinsic.empty()) throw InvalidInput("build_goal_signals: no participants");
  const std::size_t m = intrinsic.front().size();
  const int z = intrinsic.front().z;
  std::vector<GoalSignal> signals;
  for (int level = 1; level <= z; ++level) {
    signals.push_back(GoalSignal{level, std::vector<double>(m, 0.0)});
  }
  for (const auto& sel : intrinsic) {
    if (sel.size() != m || sel.z != z) {
      throw InvalidInput("build_goal_signals: participants differ in scenarios or levels");
    }
    sel.validate();
    for (std::size_t j = 0; j < m; ++j) signals[sel.levels[j] - 1].values[j] += 1.0;
  }
  const double n = static_cast<double>(intrinsic.size());
  for (auto& s : signals) {
    for (double& v : s.values) v /= n;
  }
  return signals;
}

std::vector<double> standardize(std::span<const double> signal) {
  const std::size_t m = signal.size();
  std::vector<double> out(m, 0.0);
  if (m == 0) return out;
  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double v : signal) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(m));
  if (sd < kZeroVariance) return out;
  for (std::size_t j = 0; j < m; ++j) out[j] = (signal[j] - mean) / sd;
  return out;
}

double standardized_rss(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInput("standardized_rss: length mismatch");
  const auto sa = standardize(a);
  const auto sb = standardize(b);
  double rss = 0.0;
  for (std::size_t j = 0; j < sa.size(); ++j) rss += (sa[j] - sb[j]) * (sa[j] - sb[j]);
  return rss;
}

MismatchReport mismatch(std::span<const double> aggregate, std::span<const double> goal) {
  if (aggregate.size() != goal.size()) {
    throw InvalidInput("mismatch: aggregate has " + std::to_string(aggregate.size()) +
                       " values, goal has " + std::to_string(goal.size()));
  }
  if (aggregate.empty()) throw InvalidInput("mismatch: empty signals");
  const auto sa = standardize(aggregate);
  const auto sg = standardize(goal);
  MismatchReport report;
  report.per_scenario.resize(sa.size());
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < sa.size(); ++j) {
    const double e = std::abs(sa[j] - sg[j]);
    report.per_scenario[j] = e;
    sum += e;
    sum_sq += e * e;
  }
  const double m = static_cast<double>(sa.size());
  report.mean_abs = sum / m;
  report.rmse = std::sqrt(sum_sq / m);
  return report;
}

}  // namespace privcoord
