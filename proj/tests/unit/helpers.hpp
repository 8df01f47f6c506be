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

#include <vector>

#include "privcoord/random.hpp"
#include "privcoord/sharing_model.hpp"

namespace testing_helpers {

inline std::vector<double> simplex(privcoord::Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-3;
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

inline privcoord::WeightProfile random_profile(privcoord::Rng& rng,
                                               const privcoord::ScenarioCatalog& catalog) {
  privcoord::WeightProfile p;
  p.participant_id = "r";
  p.criterion_weights = simplex(rng, catalog.num_criteria());
  for (const auto& c : catalog.criteria()) p.element_weights.push_back(simplex(rng, c.elements.size()));
  return p;
}

inline privcoord::SelectionVector random_selection(privcoord::Rng& rng, std::size_t m, int z) {
  privcoord::SelectionVector s;
  s.z = z;
  for (std::size_t j = 0; j < m; ++j) s.levels.push_back(1 + static_cast<int>(rng.uniform_index(z)));
  return s;
}

}  // namespace testing_helpers
