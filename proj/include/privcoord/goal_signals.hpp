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

#include <span>
#include <vector>

#include "privcoord/sharing_model.hpp"

namespace privcoord {

/// Per-scenario share of participants choosing one data-sharing level.
///
/// `level` 1 is the very-low privacy-preservation goal (share everything),
/// level z the very-high one (share nothing).
struct GoalSignal {
  int level = 1;
  std::vector<double> values;
};

struct MismatchReport {
  std::vector<double> per_scenario;
  double mean_abs = 0.0;
  double rmse = 0.0;
};

/// One signal per level built from intrinsic (unrewarded) choices. For every
/// scenario the z signals sum to one.
std::vector<GoalSignal> build_goal_signals(std::span<const SelectionVector> intrinsic);

/// Zero-mean, unit population-variance copy. Constant input maps to zeros.
std::vector<double> standardize(std::span<const double> signal);

/// Residual sum of squares between the standardized versions of both signals.
double standardized_rss(std::span<const double> a, std::span<const double> b);

/// Absolute error of standardized signals per scenario plus summaries.
MismatchReport mismatch(std::span<const double> aggregate, std::span<const double> goal);

inline MismatchReport mismatch(std::span<const double> aggregate, const GoalSignal& goal) {
  return mismatch(aggregate, std::span<const double>(goal.values));
}

}  // namespace privcoord
