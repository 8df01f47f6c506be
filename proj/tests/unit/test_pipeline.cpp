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

#include <filesystem>

#include "doctest.h"
#include "privcoord/dataset.hpp"
#include "privcoord/errors.hpp"
#include "privcoord/io.hpp"
#include "privcoord/pipeline.hpp"

using namespace privcoord;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const std::string& name) {
  ExperimentConfig c;
  c.participants = 20;
  c.iterations = 10;
  c.repetitions = 3;
  c.output_dir = fs::temp_directory_path() / ("privcoord_pipeline_" + name);
  fs::remove_all(c.output_dir);
  return c;
}

}  // namespace

TEST_CASE("synthetic pipeline writes every artifact") {
  const auto c = small_config("smoke");
  const auto out = run_pipeline(c);
  for (const char* f : {"fig3a_privacy.csv", "fig3b_mismatch.csv", "fig4_costs.csv", "report.json",
                        "manifest.json", "goals/goal_level_5.csv", "conjoint/intrinsic_partworths.json",
                        "coordination/goal_level_1.json", "events.csv", "groups.csv"}) {
    CHECK_MESSAGE(fs::exists(c.output_dir / f), f);
  }
  CHECK(out.summary.participants == 20);
  CHECK(out.summary.goals.size() == 2);
  CHECK(io::read_portfolio_dir(c.output_dir / "portfolios").size() == 20);
}

TEST_CASE("same config gives identical bytes") {
  const auto a = compute_pipeline(small_config("a"));
  const auto b = compute_pipeline(small_config("b"));
  CHECK(a.files == b.files);
  auto other = small_config("c");
  other.seed = 7;
  CHECK(compute_pipeline(other).files.at("fig3a_privacy.csv") != a.files.at("fig3a_privacy.csv"));
}

TEST_CASE("config errors fail fast without output") {
  auto c = small_config("bad");
  c.weights = CostWeights{0.9, 0.9};
  CHECK_THROWS_AS(run_pipeline(c), StageError);
  CHECK_FALSE(fs::exists(c.output_dir));

  auto missing = small_config("missing");
  missing.population_path = "/nonexistent/population.txt";
  try {
    run_pipeline(missing);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "config");
  }
  CHECK_FALSE(fs::exists(missing.output_dir));

  auto goal = small_config("goal");
  goal.goal_levels = {6};
  CHECK_THROWS_AS(run_pipeline(goal), StageError);
}

TEST_CASE("dataset mode reproduces the synthetic run") {
  const auto synthetic = run_pipeline(small_config("export"));
  auto c = small_config("dataset");
  c.responses_path = small_config("export").output_dir;  // replaced below
  const auto dir = fs::temp_directory_path() / "privcoord_pipeline_export_files";
  fs::remove_all(dir);
  io::write_text(dir / "responses.csv", synthetic.files.at("responses.csv"));
  io::write_text(dir / "profiles.csv", synthetic.files.at("profiles.csv"));
  c.responses_path = dir / "responses.csv";
  c.profiles_path = dir / "profiles.csv";
  const auto out = compute_pipeline(c);
  CHECK(out.summary.dataset);
  CHECK(out.summary.cost_rewarded1 == doctest::Approx(synthetic.summary.cost_rewarded1).epsilon(1e-9));
  CHECK(out.summary.privacy_intrinsic == synthetic.summary.privacy_intrinsic);
}

TEST_CASE("canonical config text and seeds") {
  ExperimentConfig c;
  CHECK(c.canonical().find("seed = 20160607") != std::string::npos);
  const auto s = plan_seeds(c);
  CHECK(s.coordination.size() == 2);
  CHECK(s.coordination.at(1) != s.coordination.at(5));
}
