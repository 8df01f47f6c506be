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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "privcoord/conjoint.hpp"
#include "privcoord/dataset.hpp"
#include "privcoord/errors.hpp"
#include "privcoord/goal_signals.hpp"
#include "privcoord/io.hpp"
#include "privcoord/metrics.hpp"
#include "privcoord/pipeline.hpp"

namespace fs = std::filesystem;
using namespace privcoord;

namespace {

struct Common {
  std::string output_dir = "privcoord-out";
  std::string catalog;
  int levels = kDefaultLevels;
};

ScenarioCatalog load_catalog(const Common& c) {
  return c.catalog.empty() ? ScenarioCatalog::default_catalog() : io::read_catalog(c.catalog);
}

std::optional<fs::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

DatasetBundle load_responses(const std::string& responses, const std::string& profiles,
                             const std::string& mapping, const Common& common,
                             const ScenarioCatalog& catalog) {
  ColumnMapping m = mapping.empty() ? ColumnMapping{} : ColumnMapping::read(mapping);
  m.levels = common.levels;
  auto bundle = ingest(responses, opt_path(profiles), m, catalog);
  for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
  return bundle;
}

void add_output(CLI::App* cmd, Common& common) {
  cmd->add_option("-o,--output-dir", common.output_dir, "Output directory")
      ->envname("PRIVCOORD_OUTPUT_DIR");
}

void add_catalog(CLI::App* cmd, Common& common) {
  cmd->add_option("--catalog", common.catalog, "Criteria file (default: 4x4x4 catalog)");
  cmd->add_option("--levels", common.levels, "Data-sharing levels z")->check(CLI::Range(2, 100));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated data sharing under privacy and rewards"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // simulate
  Common sim_common;
  std::string sim_population;
  std::size_t sim_n = 84;
  std::uint64_t sim_seed = 20160607;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic population and its choices");
  add_output(sim, sim_common);
  add_catalog(sim, sim_common);
  sim->add_option("--population", sim_population, "Population spec file")->check(CLI::ExistingFile);
  sim->add_option("-n,--participants", sim_n, "Number of participants");
  sim->add_option("--seed", sim_seed, "Master seed");

  // ingest
  Common ing_common;
  std::string ing_responses, ing_profiles, ing_mapping;
  auto* ing = app.add_subcommand("ingest", "Map an external responses table to canonical files");
  add_output(ing, ing_common);
  add_catalog(ing, ing_common);
  ing->add_option("--responses", ing_responses, "Responses table")->required()->check(CLI::ExistingFile);
  ing->add_option("--profiles", ing_profiles, "Weight profiles CSV")->check(CLI::ExistingFile);
  ing->add_option("--mapping", ing_mapping, "Column-mapping config")->check(CLI::ExistingFile);

  // goals
  Common goal_common;
  std::string goal_responses;
  auto* goal = app.add_subcommand("goals", "Build goal signals from intrinsic choices");
  add_output(goal, goal_common);
  add_catalog(goal, goal_common);
  goal->add_option("--responses", goal_responses, "Canonical responses CSV")->required()->check(CLI::ExistingFile);

  // coordinate
  Common co_common;
  std::string co_plans, co_goal;
  CostWeights co_weights;
  CoordinationOptions co_options;
  co_options.seed = 20160607;
  int co_level = 0;
  auto* co = app.add_subcommand("coordinate", "Select one plan per agent by collective learning");
  add_output(co, co_common);
  co->add_option("--plans-dir,--plans_dir", co_plans, "Directory of *.plans files")->required()->check(CLI::ExistingDirectory);
  co->add_option("--goal-file,--goal_file", co_goal, "Goal signal CSV")->required()->check(CLI::ExistingFile);
  co->add_option("--goal-level", co_level, "Level recorded in the output");
  co->add_option("--alpha", co_weights.alpha, "Unfairness weight");
  co->add_option("--beta", co_weights.beta, "Local cost weight");
  co->add_option("--iterations", co_options.iterations, "Learning iterations");
  co->add_option("--repetitions", co_options.repetitions, "Repetitions");
  co->add_option("--seed", co_options.seed, "Master seed");
  co->add_option("--children-per-node,--children_per_node", co_options.children_per_node, "Tree fan-out");
  co->set_config("--config");

  // evaluate
  Common ev_common;
  std::string ev_responses, ev_profiles;
  std::string ev_mode = "geometric";
  auto* ev = app.add_subcommand("evaluate", "Privacy, reinforcement and cost per condition");
  add_output(ev, ev_common);
  add_catalog(ev, ev_common);
  ev->add_option("--responses", ev_responses, "Canonical responses CSV")->required()->check(CLI::ExistingFile);
  ev->add_option("--profiles", ev_profiles, "Weight profiles CSV")->check(CLI::ExistingFile);
  ev->add_option("--reward-mode", ev_mode, "linear or geometric");

  // conjoint
  Common cj_common;
  std::string cj_responses, cj_condition = "intrinsic", cj_coefficients;
  auto* cj = app.add_subcommand("conjoint", "Regress privacy on the scenario design");
  add_output(cj, cj_common);
  add_catalog(cj, cj_common);
  auto* cj_resp = cj->add_option("--responses", cj_responses, "Canonical responses CSV")->check(CLI::ExistingFile);
  cj->add_option("--condition", cj_condition, "intrinsic, rewarded1 or rewarded2");
  auto* cj_coef = cj->add_option("--coefficients", cj_coefficients,
                                 "CSV element,coefficient; computes partworths only")
                      ->check(CLI::ExistingFile);
  cj_resp->excludes(cj_coef);

  // pipeline
  ExperimentConfig pc;
  std::string pc_catalog, pc_population, pc_responses, pc_profiles, pc_mapping, pc_mode = "geometric";
  std::string pc_output = pc.output_dir.string();
  bool pc_free = false;
  auto* pl = app.add_subcommand("pipeline", "Run every stage and write all artifacts");
  pl->set_config("--config", "", "INI/TOML configuration file");
  pl->add_option("-o,--output-dir,--output_dir", pc_output, "Output directory")->envname("PRIVCOORD_OUTPUT_DIR");
  pl->add_option("--catalog", pc_catalog, "Criteria file");
  pl->add_option("--population", pc_population, "Population spec file");
  pl->add_option("-n,--participants", pc.participants, "Synthetic participants");
  pl->add_option("--responses", pc_responses, "Responses table (dataset mode)");
  pl->add_option("--profiles", pc_profiles, "Weight profiles CSV");
  pl->add_option("--mapping", pc_mapping, "Column-mapping config");
  pl->add_option("--budget-participation,--budget_participation", pc.budget.participation, "Participation budget");
  pl->add_option("--budget-sharing,--budget_sharing", pc.budget.sharing, "Sharing budget");
  pl->add_option("--reward-mode,--reward_mode", pc_mode, "linear or geometric");
  pl->add_option("--levels", pc.levels, "Data-sharing levels z");
  pl->add_option("--goal-levels,--goal_levels", pc.goal_levels, "Goal levels to coordinate on")->delimiter(',');
  pl->add_option("--alpha", pc.weights.alpha, "Unfairness weight");
  pl->add_option("--beta", pc.weights.beta, "Local cost weight");
  pl->add_option("--iterations", pc.iterations, "Learning iterations");
  pl->add_option("--repetitions", pc.repetitions, "Repetitions");
  pl->add_option("--children-per-node,--children_per_node", pc.children_per_node, "Tree fan-out");
  pl->add_option("--seed", pc.seed, "Master seed");
  pl->add_option("--clusters", pc.clusters, "Groups extracted by k-means");
  pl->add_flag("--intrinsic-free,--intrinsic_free", pc_free, "Price selected intrinsic plans at zero");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      ExperimentConfig c;
      c.catalog_path = opt_path(sim_common.catalog);
      c.population_path = opt_path(sim_population);
      c.participants = sim_n;
      c.seed = sim_seed;
      c.levels = sim_common.levels;
      c.repetitions = 1;
      c.iterations = 1;
      const auto out = compute_pipeline(c);
      const fs::path dir = sim_common.output_dir;
      for (const auto& [name, content] : out.files) {
        if (name == "population.txt" || name == "events.csv" || name == "profiles.csv" ||
            name == "responses.csv" || name.starts_with("portfolios/")) {
          io::write_text(dir / name, content);
        }
      }
      std::cout << "simulated " << out.summary.participants << " participants into " << dir.string() << "\n";
    } else if (*ing) {
      const auto catalog = load_catalog(ing_common);
      const auto bundle = load_responses(ing_responses, ing_profiles, ing_mapping, ing_common, catalog);
      const auto records = bundle.records(catalog);
      const fs::path dir = ing_common.output_dir;
      io::write_text(dir / "responses.csv", format_responses(records));
      if (!bundle.profiles.empty()) io::write_text(dir / "profiles.csv", io::format_profiles(bundle.profiles, catalog));
      std::size_t complete = 0;
      for (const auto& rec : records) {
        try {
          io::write_text(dir / "portfolios" / (rec.id + ".plans"), io::format_portfolio(build_portfolio(rec)));
          ++complete;
        } catch (const IncompletePortfolio& e) {
          std::cerr << "warning: " << e.what() << "\n";
        }
      }
      std::cout << bundle.responses.size() << " responses, " << bundle.duplicates << " duplicates, "
                << bundle.issues.size() << " rejected rows, " << complete << " complete portfolios\n";
    } else if (*goal) {
      const auto catalog = load_catalog(goal_common);
      const auto bundle = load_responses(goal_responses, "", "", goal_common, catalog);
      std::vector<SelectionVector> intrinsic;
      for (const auto& rec : bundle.records(catalog)) {
        if (rec.conditions[0]) intrinsic.push_back(*rec.conditions[0]);
      }
      for (const auto& g : build_goal_signals(intrinsic)) {
        io::write_text(fs::path(goal_common.output_dir) / ("goal_level_" + std::to_string(g.level) + ".csv"),
                       io::format_signal(g.values));
      }
      std::cout << "goal signals from " << intrinsic.size() << " participants\n";
    } else if (*co) {
      co_weights.validate();
      const auto portfolios = io::read_portfolio_dir(co_plans);
      if (portfolios.empty()) throw InvalidInput("no *.plans files in " + co_plans);
      const auto goal_values = io::read_signal(co_goal, portfolios.front().plans.front().values.size());
      const auto runs = coordinate(portfolios, goal_values, co_weights, co_options);
      const fs::path dir = co_common.output_dir;
      io::write_text(dir / "coordination.json", io::runs_json(runs, portfolios, co_weights, co_level));
      io::write_text(dir / "coordination_trace.csv", io::runs_csv(runs));
      const auto s = selection_summary(runs, portfolios);
      std::cout << "final cost mean " << io::format_number(s.mean_cost) << " sd "
                << io::format_number(s.sd_cost) << "\n";
    } else if (*ev) {
      const auto catalog = load_catalog(ev_common);
      const auto bundle = load_responses(ev_responses, ev_profiles, "", ev_common, catalog);
      const RewardModel model{Budget{}, ev_common.levels, reward_mode_from_string(ev_mode)};
      std::map<std::string, WeightProfile> by_id;
      for (const auto& p : bundle.profiles) by_id[p.participant_id] = p;
      std::string out = "condition,participants,mean_privacy,collection_cost\n";
      std::string elements = "condition,criterion,element,actual,expected,reinforcement\n";
      for (auto c : kAllConditions) {
        std::vector<SelectionVector> sel;
        std::vector<WeightProfile> prof;
        for (const auto& rec : bundle.records(catalog)) {
          const auto& s = rec.conditions[static_cast<std::size_t>(c)];
          if (!s) continue;
          sel.push_back(*s);
          const auto it = by_id.find(rec.id);
          if (!bundle.profiles.empty() && it == by_id.end()) {
            throw InvalidInput("no weight profile for participant '" + rec.id + "'");
          }
          prof.push_back(it != by_id.end() ? it->second : WeightProfile::uniform(catalog, rec.id));
        }
        if (sel.empty()) continue;
        const auto snap = ConditionSnapshot::from_selections(to_string(c), sel);
        out += std::string(to_string(c)) + "," + std::to_string(sel.size()) + "," +
               io::format_number(mean_privacy(snap)) + "," +
               io::format_number(collection_cost(sel, prof, catalog, model)) + "\n";
        const auto rep = reinforcement(scenario_privacy(snap), catalog);
        for (std::size_t u = 0; u < catalog.num_criteria(); ++u) {
          for (std::size_t o = 0; o < catalog.criteria()[u].elements.size(); ++o) {
            const auto& r = rep.reinforcement[u][o];
            elements += std::string(to_string(c)) + "," + catalog.criteria()[u].name + "," +
                        catalog.criteria()[u].elements[o] + "," + io::format_number(rep.actual[u][o]) +
                        "," + io::format_number(rep.expected[u][o]) + "," +
                        (r ? io::format_number(*r) : std::string()) + "\n";
          }
        }
      }
      io::write_text(fs::path(ev_common.output_dir) / "evaluation.csv", out);
      io::write_text(fs::path(ev_common.output_dir) / "elements.csv", elements);
      std::cout << out;
    } else if (*cj) {
      const auto catalog = load_catalog(cj_common);
      const fs::path dir = cj_common.output_dir;
      PartworthReport report;
      if (!cj_coefficients.empty()) {
        std::vector<std::vector<double>> coef;
        for (const auto& c : catalog.criteria()) coef.emplace_back(c.elements.size(), 0.0);
        const auto table = io::read_csv(cj_coefficients);
        for (const auto& row : table.rows) {
          if (row.fields.size() < 2) throw IngestError(cj_coefficients, row.line, "expected element,coefficient");
          const auto at = catalog.find_element(row.fields[0]);
          if (!at) continue;  // intercept and unknown terms
          coef[at->first][at->second] = io::parse_double(row.fields[1], "coefficient");
        }
        report = partworths(coef);
      } else {
        if (cj_responses.empty()) throw InvalidInput("conjoint needs --responses or --coefficients");
        const auto bundle = load_responses(cj_responses, "", "", cj_common, catalog);
        const auto condition = condition_from_string(cj_condition);
        std::vector<SelectionVector> sel;
        for (const auto& rec : bundle.records(catalog)) {
          if (const auto& s = rec.conditions[static_cast<std::size_t>(condition)]) sel.push_back(*s);
        }
        const auto design = encode(catalog);
        const auto f = fit(design, scenario_privacy(ConditionSnapshot::from_selections(cj_condition, sel)));
        io::write_text(dir / (cj_condition + "_coefficients.csv"), io::format_coefficients(f, design));
        report = partworths(f, design);
      }
      const auto json = io::partworths_json(report, catalog);
      io::write_text(dir / (cj_condition + "_partworths.json"), json);
      std::cout << json;
    } else if (*pl) {
      pc.output_dir = pc_output;
      pc.catalog_path = opt_path(pc_catalog);
      pc.population_path = opt_path(pc_population);
      pc.responses_path = opt_path(pc_responses);
      pc.profiles_path = opt_path(pc_profiles);
      pc.mapping_path = opt_path(pc_mapping);
      pc.reward_mode = reward_mode_from_string(pc_mode);
      pc.budget = Budget::from_parts(pc.budget.participation, pc.budget.sharing);
      pc.include_intrinsic_value = !pc_free;
      const auto out = run_pipeline(pc);
      std::cout << "wrote " << out.files.size() << " files to " << pc.output_dir.string()
                << " (config " << out.config_hash << ")\n";
      for (const auto& w : out.summary.warnings) std::cerr << "warning: " << w << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
