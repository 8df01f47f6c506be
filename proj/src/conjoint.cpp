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

#include "privcoord/conjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "privcoord/errors.hpp"

namespace privcoord {

DesignMatrix encode(const ScenarioCatalog& catalog, std::span<const std::size_t> references) {
  const auto& criteria = catalog.criteria();
  if (references.size() != criteria.size()) {
    throw InvalidInput("encode: need one reference element per criterion");
  }
  DesignMatrix d;
  d.references.assign(references.begin(), references.end());
  d.labels.push_back("intercept");
  for (std::size_t u = 0; u < criteria.size(); ++u) {
    const std::size_t q = criteria[u].elements.size();
    if (references[u] >= q) {
      throw InvalidInput("encode: reference element out of range for '" + criteria[u].name + "'");
    }
    d.elements_per_criterion.push_back(q);
    for (std::size_t o = 0; o < q; ++o) {
      if (o == references[u]) continue;
      d.columns.emplace_back(u, o);
      d.labels.push_back(criteria[u].elements[o]);
    }
  }

  const auto rows = static_cast<Eigen::Index>(catalog.size());
  const auto cols = static_cast<Eigen::Index>(d.columns.size() + 1);
  d.matrix = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& s : catalog.scenarios()) {
    const auto r = static_cast<Eigen::Index>(s.id - 1);
    d.matrix(r, 0) = 1.0;
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
      const auto [u, o] = d.columns[c];
      if (s.elements[u] == o) d.matrix(r, static_cast<Eigen::Index>(c + 1)) = 1.0;
    }
  }
  return d;
}

DesignMatrix encode(const ScenarioCatalog& catalog) {
  const std::vector<std::size_t> refs(catalog.num_criteria(), 0);
  return encode(catalog, refs);
}

RegressionFit fit(const DesignMatrix& design, std::span<const double> response) {
  const auto& x = design.matrix;
  const Eigen::Index m = x.rows();
  const Eigen::Index p = x.cols();
  if (static_cast<Eigen::Index>(response.size()) != m) {
    throw InvalidInput("fit: response has " + std::to_string(response.size()) +
                       " values, design has " + std::to_string(m) + " rows");
  }
  if (m <= p) throw InvalidInput("fit: need more observations than columns");

  const Eigen::Map<const Eigen::VectorXd> y(response.data(), m);
  const Eigen::MatrixXd gram = x.transpose() * x;

  // Rank check on the Gram matrix before solving.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxConditionNumber)) {
    throw SingularDesign("design is rank-deficient (condition number " + std::to_string(cond) +
                         "); check the reference elements");
  }

  RegressionFit f;
  f.condition_number = cond;
  f.coefficients = gram.llt().solve(x.transpose() * y);
  f.fitted = x * f.coefficients;
  f.residuals = y - f.fitted;

  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = f.residuals.squaredNorm();
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  const double predictors = static_cast<double>(p - 1);
  f.adjusted_r_squared =
      1.0 - (1.0 - f.r_squared) * static_cast<double>(m - 1) / (static_cast<double>(m) - predictors - 1.0);
  return f;
}

std::vector<std::vector<double>> element_coefficients(const RegressionFit& fit,
                                                      const DesignMatrix& design) {
  std::vector<std::vector<double>> coef;
  for (std::size_t q : design.elements_per_criterion) coef.emplace_back(q, 0.0);
  for (std::size_t c = 0; c < design.columns.size(); ++c) {
    const auto [u, o] = design.columns[c];
    coef[u][o] = fit.coefficients[static_cast<Eigen::Index>(c + 1)];
  }
  return coef;
}

PartworthReport partworths(const std::vector<std::vector<double>>& coefficients) {
  PartworthReport report;
  if (coefficients.empty()) throw InvalidInput("partworths: no criteria");

  std::vector<double> ranges;
  double range_sum = 0.0;
  double global_max = -std::numeric_limits<double>::infinity();
  double global_min = std::numeric_limits<double>::infinity();
  double global_sum = 0.0;
  std::size_t global_count = 0;
  for (const auto& row : coefficients) {
    if (row.empty()) throw InvalidInput("partworths: criterion without elements");
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    ranges.push_back(*hi - *lo);
    range_sum += ranges.back();
    global_max = std::max(global_max, *hi);
    global_min = std::min(global_min, *lo);
    for (double b : row) global_sum += b;
    global_count += row.size();
  }
  if (!(range_sum > 0.0)) {
    report.degenerate = true;
    return report;
  }

  const double global_mean = global_sum / static_cast<double>(global_count);
  const double global_range = global_max - global_min;
  for (std::size_t u = 0; u < coefficients.size(); ++u) {
    const auto& row = coefficients[u];
    report.criterion_utilities.push_back(100.0 * ranges[u] / range_sum);
    double mean = 0.0;
    for (double b : row) mean += b;
    mean /= static_cast<double>(row.size());
    std::vector<double> within;
    std::vector<double> across;
    for (double b : row) {
      within.push_back(100.0 * (b - mean) / range_sum);
      across.push_back(100.0 * (b - global_mean) / global_range);
    }
    report.within_criterion.push_back(std::move(within));
    report.across_criteria.push_back(std::move(across));
  }
  return report;
}

}  // namespace privcoord
