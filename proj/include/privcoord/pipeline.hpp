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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "privcoord/collective_learning.hpp"
#include "privcoord/population.hpp"
#include "privcoord/sharing_model.hpp"

namespace privcoord {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64";

struct ExperimentConfig {
  std::optional<std::filesystem::path> catalog_path;  // default catalog when empty
  Budget budget;
  RewardMode reward_mode = RewardMode::Geometric;
  int levels = kDefaultLevels;

  // Synthetic mode: population spec file, or n / master seed below.
  std::optional<std::filesystem::path> population_path;
  std::size_t participants = 84;

  // Dataset mode when a responses file is given.
  std::optional<std::filesystem::path> responses_path;
  std::optional<std::filesystem::path> profiles_path;
  std::optional<std::filesystem::path> mapping_path;

  std::vector<int> goal_levels;  // empty means {1, levels}
  CostWeights weights;
  std::size_t iterations = 50;
  std::size_t repetitions = 10;
  std::size_t children_per_node = 2;
  std::uint64_t seed = 20160607;
  bool include_intrinsic_value = true;
  std::size_t clusters = 5;
  std::filesystem::path output_dir = "privcoord-out";

  /// Fail-fast checks: parameter ranges and that every referenced file exists.
  void validate() const;

  /// Canonical `key = value` text; its hash identifies the configuration.
  std::string canonical() const;

  std::vector<int> effective_goal_levels() const;
};

/// Seeds of every random stream, all derived from the master seed.
struct SeedPlan {
  std::uint64_t master = 0;
  std::uint64_t population = 0;
  std::uint64_t clustering = 0;
  std::map<int, std::uint64_t> coordination;  // per goal level
};

SeedPlan plan_seeds(const ExperimentConfig& config);

struct GoalSummary {
  int level = 1;
  double mismatch_intrinsic = 0.0;
  double mismatch_rewarded = 0.0;
  double mismatch_coordinated = 0.0;
  double rmse_intrinsic = 0.0;
  double rmse_rewarded = 0.0;
  double rmse_coordinated = 0.0;
  double privacy_coordinated = 0.0;
  std::optional<double> recovery;
  std::vector<double> coordinated_costs;       // per repetition
  std::vector<double> coordinated_costs_free;  // intrinsic plans priced at zero
  double coordinated_cost_mean = 0.0;
  double coordinated_cost_sd = 0.0;
};

struct PipelineSummary {
  std::size_t participants = 0;
  bool dataset = false;
  double privacy_intrinsic = 0.0;
  double privacy_rewarded1 = 0.0;
  double privacy_rewarded2 = 0.0;
  double cost_intrinsic = 0.0;
  double cost_rewarded1 = 0.0;
  double cost_rewarded2 = 0.0;
  double intrinsic_intercept = 0.0;
  std::vector<GoalSummary> goals;
  std::vector<std::string> warnings;
};

/// Every artifact of a run, keyed by path relative to the output directory.
struct PipelineOutput {
  std::map<std::string, std::string> files;
  PipelineSummary summary;
  std::string config_hash;
};

/// Runs simulate/ingest, goals, coordinate, metrics and conjoint in memory.
/// A failing stage throws StageError naming it.
PipelineOutput compute_pipeline(const ExperimentConfig& config);

/// compute_pipeline followed by writing all files under config.output_dir.
/// Nothing is written when validation or any stage fails.
PipelineOutput run_pipeline(const ExperimentConfig& config);

void write_outputs(const PipelineOutput& output, const std::filesystem::path& dir);

}  // namespace privcoord
