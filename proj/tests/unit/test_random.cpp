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
#include <numeric>

#include "doctest.h"
#include "privcoord/random.hpp"

using privcoord::Rng;

TEST_CASE("mt19937_64 stream matches the standard's 10000th value") {
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  CHECK(v == 9981545732273789042ULL);
}

TEST_CASE("uniform stays in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform_index covers the range without bias beyond noise") {
  Rng rng(2);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("discrete never draws a zero-weight index") {
  Rng rng(3);
  const std::vector<double> w = {0.0, 1.0, 0.0, 3.0};
  int threes = 0;
  for (int i = 0; i < 4000; ++i) {
    const auto k = rng.discrete(w);
    CHECK((k == 1 || k == 3));
    threes += k == 3;
  }
  CHECK(std::abs(threes - 3000) < 150);
}

TEST_CASE("normal has unit moments") {
  Rng rng(4);
  double s = 0.0, s2 = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.02);
  CHECK(std::abs(s2 / n - 1.0) < 0.03);
}

TEST_CASE("shuffle is a permutation and reproducible") {
  std::vector<int> a(50), b;
  std::iota(a.begin(), a.end(), 0);
  b = a;
  Rng r1(9), r2(9);
  r1.shuffle(a);
  r2.shuffle(b);
  CHECK(a == b);
  std::sort(a.begin(), a.end());
  for (int i = 0; i < 50; ++i) CHECK(a[i] == i);
}

TEST_CASE("derived seeds differ per stream and are stable") {
  CHECK(privcoord::derive_seed(1, 0) != privcoord::derive_seed(1, 1));
  CHECK(privcoord::derive_seed(1, 7) == privcoord::derive_seed(1, 7));
  CHECK(privcoord::derive_seed(1, 7) != privcoord::derive_seed(2, 7));
}
