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

#include "privcoord/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "privcoord/errors.hpp"
#include "privcoord/random.hpp"

namespace privcoord {

namespace {

double squared_distance(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

std::size_t nearest(const Point& p, const std::vector<Point>& centroids, double* distance) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

std::vector<Point> plus_plus(const std::vector<Point>& points, std::size_t k, Rng& rng) {
  std::vector<Point> centroids;
  centroids.push_back(points[rng.uniform_index(points.size())]);
  std::vector<double> d2(points.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      nearest(points[i], centroids, &d2[i]);
      total += d2[i];
    }
    // All points coincide with a centroid: fall back to a uniform pick.
    const std::size_t next =
        total > 0.0 ? rng.discrete(d2) : static_cast<std::size_t>(rng.uniform_index(points.size()));
    centroids.push_back(points[next]);
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (k == 0) throw InvalidInput("kmeans: k must be at least 1");
  if (points.size() < k) {
    throw InvalidInput("kmeans: " + std::to_string(points.size()) + " points for k = " +
                       std::to_string(k));
  }
  const std::size_t dim = points.front().size();
  for (const auto& p : points) {
    if (p.size() != dim) throw InvalidInput("kmeans: points differ in dimension");
  }

  Rng rng(seed);
  KMeansResult r;
  r.centroids = plus_plus(points, k, rng);
  r.assignments.assign(points.size(), 0);

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    double inertia = 0.0;
    std::vector<double> dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      r.assignments[i] = nearest(points[i], r.centroids, &dist[i]);
      inertia += dist[i];
    }
    r.inertia_trace.push_back(inertia);

    std::vector<Point> next(k, Point(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto& c = next[r.assignments[i]];
      for (std::size_t d = 0; d < dim; ++d) c[d] += points[i][d];
      ++counts[r.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (double& v : next[c]) v /= static_cast<double>(counts[c]);
        continue;
      }
      const auto far = static_cast<std::size_t>(
          std::max_element(dist.begin(), dist.end()) - dist.begin());
      next[c] = points[far];
      dist[far] = 0.0;
      ++r.reseeded;
    }

    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(r.centroids[c], next[c])));
    }
    r.centroids = std::move(next);
    r.iterations = it + 1;
    if (shift < options.tolerance) {
      r.converged = true;
      break;
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    r.assignments[i] = nearest(points[i], r.centroids, nullptr);
  }
  return r;
}

}  // namespace privcoord
