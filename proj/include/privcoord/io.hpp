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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "privcoord/collective_learning.hpp"
#include "privcoord/conjoint.hpp"
#include "privcoord/population.hpp"
#include "privcoord/retrieval.hpp"
#include "privcoord/sharing_model.hpp"

namespace privcoord::io {

/// Decimal text with 12 significant digits, the format of every numeric output.
std::string format_number(double value);

/// `value` rounded to what format_number prints.
double round_output(double value);

/// 64-bit FNV-1a hash.
std::uint64_t fnv1a(std::string_view text);
std::string hex64(std::uint64_t value);

struct CsvRow {
  std::size_t line = 0;  // 1-based line in the source file
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

/// Splits one line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

/// Reads a delimited file with a header row. Blank lines are skipped.
/// Throws IngestError when the file cannot be opened.
CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

std::string read_text(const std::filesystem::path& path);

/// Writes a file, creating parent directories as needed.
void write_text(const std::filesystem::path& path, std::string_view content);

/// Parses a number, throwing InvalidInput with `what` in the message.
double parse_double(std::string_view text, std::string_view what);
long long parse_integer(std::string_view text, std::string_view what);

/// Criteria file: one `name: element, element, ...` per line, '#' comments.
ScenarioCatalog parse_catalog(std::string_view text);
ScenarioCatalog read_catalog(const std::filesystem::path& path);

/// Profiles CSV: participant_id, k criterion weights, then the element weights
/// criterion by criterion.
std::string format_profiles(std::span<const WeightProfile> profiles,
                            const ScenarioCatalog& catalog);
std::vector<WeightProfile> read_profiles(const std::filesystem::path& path,
                                         const ScenarioCatalog& catalog);

/// Plan file: one `local_cost:v1,v2,...,vm` line per plan. A preceding
/// `# label: name` comment names the plan.
std::string format_portfolio(const PlanPortfolio& portfolio);
PlanPortfolio parse_portfolio(std::string_view text, std::string agent_id,
                              const std::string& source = "<memory>");
PlanPortfolio read_portfolio(const std::filesystem::path& path);

/// All `*.plans` files in a directory, ordered by file name.
std::vector<PlanPortfolio> read_portfolio_dir(const std::filesystem::path& dir);
void write_portfolio_dir(const std::filesystem::path& dir,
                         std::span<const PlanPortfolio> portfolios);

/// Per-scenario signal CSV with header `scenario_id,value`.
std::string format_signal(std::span<const double> values);
/// Throws InvalidInput unless the file holds exactly ids 1..m in order.
std::vector<double> read_signal(const std::filesystem::path& path, std::size_t m);

std::string format_events(std::span<const ChoiceEvent> events);

std::string format_coefficients(const RegressionFit& fit, const DesignMatrix& design);
std::string partworths_json(const PartworthReport& report, const ScenarioCatalog& catalog);

/// Cost traces, final selections and responses of coordination runs.
std::string runs_json(std::span<const CoordinationRun> runs,
                      std::span<const PlanPortfolio> portfolios, const CostWeights& weights,
                      int goal_level);
/// Long format: repetition,iteration,cost.
std::string runs_csv(std::span<const CoordinationRun> runs);

/// Population spec: `key = value` lines. Keys are n, mix (five shares in
/// group order), z, seed, steps, sensitivity and per-group overrides
/// `<group>.intrinsic`, `<group>.rewarded`, `<group>.drift`.
PopulationSpec parse_population_spec(std::string_view text);
PopulationSpec read_population_spec(const std::filesystem::path& path);
std::string format_population_spec(const PopulationSpec& spec);

}  // namespace privcoord::io
