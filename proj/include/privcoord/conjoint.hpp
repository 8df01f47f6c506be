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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "privcoord/sharing_model.hpp"

namespace privcoord {

/// Dummy-coded full factorial design with an intercept column.
///
/// Column 0 is the intercept; the remaining columns are one indicator per
/// non-reference element, criterion-major in element order.
struct DesignMatrix {
  Eigen::MatrixXd matrix;
  std::vector<std::size_t> references;                       // per criterion
  std::vector<std::pair<std::size_t, std::size_t>> columns;  // (criterion, element), excl. intercept
  std::vector<std::string> labels;                           // "intercept", then element labels
  std::vector<std::size_t> elements_per_criterion;
};

/// Encodes the catalog; `references` holds the dropped element per criterion.
DesignMatrix encode(const ScenarioCatalog& catalog, std::span<const std::size_t> references);

/// Reference elements at index 0 of every criterion (acc, cor, soc by default).
DesignMatrix encode(const ScenarioCatalog& catalog);

struct RegressionFit {
  Eigen::VectorXd coefficients;  // [0] is the intercept
  Eigen::VectorXd fitted;
  Eigen::VectorXd residuals;
  double r_squared = 0.0;
  double adjusted_r_squared = 0.0;
  double condition_number = 0.0;

  double intercept() const { return coefficients[0]; }
};

inline constexpr double kMaxConditionNumber = 1e12;

/// Ordinary least squares through the normal equations. Throws
/// SingularDesign when the Gram matrix is singular or its condition number
/// exceeds kMaxConditionNumber.
RegressionFit fit(const DesignMatrix& design, std::span<const double> response);

/// Coefficient of every element (reference elements are 0), by criterion.
std::vector<std::vector<double>> element_coefficients(const RegressionFit& fit,
                                                      const DesignMatrix& design);

struct PartworthReport {
  bool degenerate = false;  // every criterion has zero coefficient range
  std::vector<double> criterion_utilities;             // percent, sums to 100
  std::vector<std::vector<double>> within_criterion;   // percent
  std::vector<std::vector<double>> across_criteria;    // percent
};

/// Relative importance of criteria and elements from per-element coefficients.
PartworthReport partworths(const std::vector<std::vector<double>>& coefficients);

inline PartworthReport partworths(const RegressionFit& fit, const DesignMatrix& design) {
  return partworths(element_coefficients(fit, design));
}

}  // namespace privcoord
