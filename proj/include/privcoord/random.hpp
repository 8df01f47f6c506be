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

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace privcoord {

// Seedable generator with implementation-independent derived quantities.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not (their algorithms are
// implementation-defined), so every derived draw here is computed from raw
// engine output with a documented transform. Child streams are derived with
// splitmix64 so each participant, condition and repetition gets its own
// reproducible stream from one master seed.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t uniform_index(std::uint64_t bound);

  // Index drawn with probability proportional to weights (non-negative, not all zero).
  std::size_t discrete(std::span<const double> weights);

  // Standard normal via Box-Muller on two uniforms.
  double normal();

  template <typename T>
  void shuffle(std::vector<T>& items) {
    // Fisher-Yates from the back, matching the documented index draw.
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer applied to seed ^ (stream * golden-ratio constant).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace privcoord
