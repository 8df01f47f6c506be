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
#include <vector>

namespace privcoord {

using Point = std::vector<double>;

struct KMeansOptions {
  std::size_t max_iterations = 300;
  double tolerance = 1e-9;  // largest centroid shift that counts as converged
};

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<Point> centroids;
  std::vector<double> inertia_trace;  // within-cluster sum of squares per Lloyd step
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t reseeded = 0;  // empty clusters refilled from the farthest point
};

/// k-means with seeded k-means++ initialization followed by Lloyd iterations.
///
/// Points are assigned to the nearest centroid (lowest index on ties). A
/// cluster that ends up empty is re-seeded at the point farthest from its
/// current centroid. Throws InvalidInput when there are fewer points than k.
KMeansResult kmeans(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace privcoord
