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

#include "privcoord/pipeline.hpp"

#include <cmath>
#include <functional>

#include "json.hpp"
#include "privcoord/conjoint.hpp"
#include "privcoord/dataset.hpp"
#include "privcoord/errors.hpp"
#include "privcoord/goal_signals.hpp"
#include "privcoord/io.hpp"
#include "privcoord/metrics.hpp"
#include "privcoord/random.hpp"

namespace privcoord {

namespace {

using Json = nlohmann::ordered_json;
using io::format_number;

Json number(double v) { return Json(io::round_output(v)); }

Json optional_number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void require_file(const std::optional<std::filesystem::path>& p, const char* what) {
  if (p && !std::filesystem::is_regular_file(*p)) {
    throw InvalidInput(std::string(what) + " '" + p->string() + "' does not exist");
  }
}

std::vector<double> aggregate(const std::vector<PlanPortfolio>& portfolios, std::size_t plan) {
  std::vector<double> sum(portfolios.front().plans.front().values.size(), 0.0);
  for (const auto& p : portfolios) {
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += p.plans[plan].values[j];
  }
  return sum;
}

struct Participants {
  std::vector<ParticipantRecord> records;
  std::vector<WeightProfile> profiles;
  std::vector<ChoiceEvent> events;
  std::vector<std::string> warnings;
  std::optional<PopulationSpec> spec;
  int levels = kDefaultLevels;
};

Participants simulate(const ExperimentConfig& config, const ScenarioCatalog& catalog,
                      const SeedPlan& seeds) {
  Participants out;
  PopulationSpec spec;
  if (config.population_path) {
    spec = io::read_population_spec(*config.population_path);
  } else {
    spec.n = config.participants;
    spec.z = config.levels;
    spec.behaviors = PopulationSpec::default_behaviors(spec.z);
  }
  spec.seed = seeds.population;
  out.levels = spec.z;
  const auto population = generate_population(spec, catalog);
  SimulationSettings settings;
  settings.steps = spec.steps;
  settings.sensitivity = spec.sensitivity;
  settings.reward_model = RewardModel{config.budget, spec.z, config.reward_mode};
  for (const auto& p : population.participants) {
    ParticipantRecord rec;
    rec.id = p.profile.participant_id;
    const auto& behavior = population.behaviors[static_cast<std::size_t>(p.group)];
    for (auto c : kAllConditions) {
      auto result = simulate_condition(p, behavior, c, catalog, settings);
      for (auto& e : result.events) e.goal = std::string(to_string(c)) + ":" + e.goal;
      out.events.insert(out.events.end(), result.events.begin(), result.events.end());
      rec.conditions[static_cast<std::size_t>(c)] = std::move(result.selection);
    }
    out.records.push_back(std::move(rec));
    out.profiles.push_back(p.profile);
  }
  out.spec = spec;
  return out;
}

Participants load_dataset(const ExperimentConfig& config, const ScenarioCatalog& catalog) {
  Participants out;
  ColumnMapping mapping = config.mapping_path ? ColumnMapping::read(*config.mapping_path)
                                              : ColumnMapping{};
  mapping.levels = config.levels;
  const auto bundle = ingest(*config.responses_path, config.profiles_path, mapping, catalog);
  out.levels = bundle.levels;
  out.warnings = bundle.warnings;
  for (const auto& issue : bundle.issues) {
    out.warnings.push_back(issue.file + ":" + std::to_string(issue.line) + ": " + issue.message);
  }
  std::map<std::string, WeightProfile> by_id;
  for (const auto& p : bundle.profiles) by_id[p.participant_id] = p;
  for (auto& rec : bundle.records(catalog)) {
    const bool complete = std::all_of(rec.conditions.begin(), rec.conditions.end(),
                                      [](const auto& c) { return c.has_value(); });
    if (!complete) {
      out.warnings.push_back("participant '" + rec.id + "' lacks a complete condition; skipped");
      continue;
    }
    if (config.profiles_path) {
      const auto it = by_id.find(rec.id);
      if (it == by_id.end()) throw InvalidInput("no weight profile for participant '" + rec.id + "'");
      out.profiles.push_back(it->second);
    } else {
      out.profiles.push_back(WeightProfile::uniform(catalog, rec.id));
    }
    out.records.push_back(std::move(rec));
  }
  if (!config.profiles_path) out.warnings.push_back("no profiles given; costs use uniform weights");
  if (out.records.empty()) throw InvalidInput("dataset holds no complete participant");
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  budget.validate();
  weights.validate();
  if (levels < 2) throw InvalidInput("levels must be at least 2");
  if (participants < 1) throw InvalidInput("participants must be at least 1");
  if (iterations < 1) throw InvalidInput("iterations must be at least 1");
  if (repetitions < 1) throw InvalidInput("repetitions must be at least 1");
  if (children_per_node < 1) throw InvalidInput("children_per_node must be at least 1");
  if (clusters < 1) throw InvalidInput("clusters must be at least 1");
  for (int g : effective_goal_levels()) {
    if (g < 1 || g > levels) throw InvalidInput("goal level " + std::to_string(g) + " outside 1..z");
  }
  if (responses_path && population_path) {
    throw InvalidInput("give either a responses file or a population spec, not both");
  }
  if (!responses_path && (profiles_path || mapping_path)) {
    throw InvalidInput("profiles and mapping files need a responses file");
  }
  require_file(catalog_path, "catalog file");
  require_file(population_path, "population spec");
  require_file(responses_path, "responses file");
  require_file(profiles_path, "profiles file");
  require_file(mapping_path, "mapping file");
}

std::vector<int> ExperimentConfig::effective_goal_levels() const {
  if (!goal_levels.empty()) return goal_levels;
  return {1, levels};
}

std::string ExperimentConfig::canonical() const {
  auto path = [](const std::optional<std::filesystem::path>& p) {
    return p ? p->generic_string() : std::string("-");
  };
  std::string goals;
  for (int g : effective_goal_levels()) goals += (goals.empty() ? "" : ",") + std::to_string(g);
  std::string s;
  s += "catalog = " + path(catalog_path) + "\n";
  s += "budget_total = " + format_number(budget.total) + "\n";
  s += "budget_participation = " + format_number(budget.participation) + "\n";
  s += "budget_sharing = " + format_number(budget.sharing) + "\n";
  s += "reward_mode = " + std::string(to_string(reward_mode)) + "\n";
  s += "levels = " + std::to_string(levels) + "\n";
  s += "population = " + path(population_path) + "\n";
  s += "participants = " + std::to_string(participants) + "\n";
  s += "responses = " + path(responses_path) + "\n";
  s += "profiles = " + path(profiles_path) + "\n";
  s += "mapping = " + path(mapping_path) + "\n";
  s += "goal_levels = " + goals + "\n";
  s += "alpha = " + format_number(weights.alpha) + "\n";
  s += "beta = " + format_number(weights.beta) + "\n";
  s += "iterations = " + std::to_string(iterations) + "\n";
  s += "repetitions = " + std::to_string(repetitions) + "\n";
  s += "children_per_node = " + std::to_string(children_per_node) + "\n";
  s += "seed = " + std::to_string(seed) + "\n";
  s += "include_intrinsic_value = " + std::string(include_intrinsic_value ? "true" : "false") + "\n";
  s += "clusters = " + std::to_string(clusters) + "\n";
  return s;
}

SeedPlan plan_seeds(const ExperimentConfig& config) {
  SeedPlan s;
  s.master = config.seed;
  s.population = derive_seed(config.seed, 1);
  s.clustering = derive_seed(config.seed, 2);
  for (int g : config.effective_goal_levels()) {
    s.coordination[g] = derive_seed(config.seed, 100 + static_cast<std::uint64_t>(g));
  }
  return s;
}

PipelineOutput compute_pipeline(const ExperimentConfig& config) {
  stage("config", [&] { config.validate(); });
  PipelineOutput out;
  out.config_hash = io::hex64(io::fnv1a(config.canonical()));
  const auto seeds = plan_seeds(config);
  auto& files = out.files;
  auto& summary = out.summary;

  const auto catalog = stage("config", [&] {
    return config.catalog_path ? io::read_catalog(*config.catalog_path)
                               : ScenarioCatalog::default_catalog();
  });
  const std::size_t m = catalog.size();

  // Participants and their three conditions.
  const bool dataset = config.responses_path.has_value();
  auto people = dataset ? stage("ingest", [&] { return load_dataset(config, catalog); })
                        : stage("simulate", [&] { return simulate(config, catalog, seeds); });
  summary.dataset = dataset;
  summary.participants = people.records.size();
  summary.warnings = people.warnings;
  const int z = people.levels;
  const RewardModel model{config.budget, z, config.reward_mode};

  std::array<std::vector<SelectionVector>, 3> selections;
  for (const auto& rec : people.records) {
    for (auto c : kAllConditions) selections[static_cast<std::size_t>(c)].push_back(rec.at(c));
  }
  const auto portfolios = stage("simulate", [&] {
    if (!dataset) {
      files["population.txt"] = io::format_population_spec(*people.spec);
      files["events.csv"] = io::format_events(people.events);
    }
    files["profiles.csv"] = io::format_profiles(people.profiles, catalog);
    files["responses.csv"] = format_responses(people.records);
    auto p = build_portfolios(people.records);
    for (const auto& portfolio : p) {
      files["portfolios/" + portfolio.agent_id + ".plans"] = io::format_portfolio(portfolio);
    }
    return p;
  });

  const auto goals = stage("goals", [&] {
    auto g = build_goal_signals(selections[0]);
    for (const auto& s : g) {
      files["goals/goal_level_" + std::to_string(s.level) + ".csv"] = io::format_signal(s.values);
    }
    return g;
  });

  std::map<int, std::vector<CoordinationRun>> runs;
  stage("coordinate", [&] {
    for (int level : config.effective_goal_levels()) {
      CoordinationOptions options;
      options.iterations = config.iterations;
      options.repetitions = config.repetitions;
      options.children_per_node = config.children_per_node;
      options.seed = seeds.coordination.at(level);
      auto r = coordinate(portfolios, goals.at(static_cast<std::size_t>(level - 1)).values,
                          config.weights, options);
      const auto base = "coordination/goal_level_" + std::to_string(level);
      files[base + ".json"] = io::runs_json(r, portfolios, config.weights, level);
      files[base + "_trace.csv"] = io::runs_csv(r);
      runs[level] = std::move(r);
    }
  });

  stage("metrics", [&] {
    const char* names[3] = {"intrinsic", "rewarded1", "rewarded2"};
    std::vector<ConditionSnapshot> snapshots;
    for (std::size_t c = 0; c < 3; ++c) {
      snapshots.push_back(ConditionSnapshot::from_selections(names[c], selections[c]));
    }
    summary.privacy_intrinsic = mean_privacy(snapshots[0]);
    summary.privacy_rewarded1 = mean_privacy(snapshots[1]);
    summary.privacy_rewarded2 = mean_privacy(snapshots[2]);
    summary.cost_intrinsic = collection_cost(selections[0], people.profiles, catalog, model);
    summary.cost_rewarded1 = collection_cost(selections[1], people.profiles, catalog, model);
    summary.cost_rewarded2 = collection_cost(selections[2], people.profiles, catalog, model);
    const double privacy_rewarded = (summary.privacy_rewarded1 + summary.privacy_rewarded2) / 2.0;

    std::vector<std::vector<double>> plan_rewards;
    for (std::size_t a = 0; a < people.records.size(); ++a) {
      std::vector<double> r;
      for (std::size_t c = 0; c < 3; ++c) {
        r.push_back(participant_rewards(selections[c][a], people.profiles[a], catalog, model));
      }
      plan_rewards.push_back(std::move(r));
    }

    // Per-scenario privacy per condition.
    std::vector<std::vector<double>> columns;
    std::vector<std::string> headers;
    for (const auto& s : snapshots) {
      headers.push_back(s.label);
      columns.push_back(scenario_privacy(s));
    }
    headers.push_back("expected_intrinsic");
    columns.push_back(expected_scenario_privacy(columns[0], catalog));

    const auto agg_intrinsic = aggregate(portfolios, 0);
    const auto agg_r1 = aggregate(portfolios, 1);
    const auto agg_r2 = aggregate(portfolios, 2);
    std::vector<double> agg_rewarded(m);
    for (std::size_t j = 0; j < m; ++j) agg_rewarded[j] = (agg_r1[j] + agg_r2[j]) / 2.0;

    std::string fig3b = "goal_level,scenario_id,intrinsic,rewarded,coordinated\n";
    std::string fig4 = "goal_level,condition,repetition,cost\n";
    for (const auto& [level, level_runs] : runs) {
      const auto& goal = goals[static_cast<std::size_t>(level - 1)];
      const auto coordinated = ConditionSnapshot::from_runs("coordinated", level_runs, portfolios);
      headers.push_back("coordinated_goal_" + std::to_string(level));
      columns.push_back(scenario_privacy(coordinated));

      const auto sel = selection_summary(level_runs, portfolios);
      const auto mi = mismatch(agg_intrinsic, goal);
      const auto mr = mismatch(agg_rewarded, goal);
      const auto mc = mismatch(sel.mean_response, goal);
      for (std::size_t j = 0; j < m; ++j) {
        fig3b += std::to_string(level) + "," + std::to_string(j + 1) + "," +
                 format_number(mi.per_scenario[j]) + "," + format_number(mr.per_scenario[j]) +
                 "," + format_number(mc.per_scenario[j]) + "\n";
      }

      GoalSummary g;
      g.level = level;
      g.mismatch_intrinsic = mi.mean_abs;
      g.mismatch_rewarded = mr.mean_abs;
      g.mismatch_coordinated = mc.mean_abs;
      g.rmse_intrinsic = mi.rmse;
      g.rmse_rewarded = mr.rmse;
      g.rmse_coordinated = mc.rmse;
      g.privacy_coordinated = mean_privacy(coordinated);
      g.recovery = privacy_recovery(privacy_rewarded, g.privacy_coordinated,
                                    summary.privacy_intrinsic);
      const auto cost = coordinated_collection_cost(level_runs, portfolios, plan_rewards,
                                                    config.include_intrinsic_value);
      const auto free = coordinated_collection_cost(level_runs, portfolios, plan_rewards, false);
      g.coordinated_costs = cost.per_repetition;
      g.coordinated_costs_free = free.per_repetition;
      g.coordinated_cost_mean = cost.mean;
      g.coordinated_cost_sd = cost.sd;

      const auto lv = std::to_string(level);
      fig4 += lv + ",intrinsic,," + format_number(summary.cost_intrinsic) + "\n";
      fig4 += lv + ",rewarded1,," + format_number(summary.cost_rewarded1) + "\n";
      fig4 += lv + ",rewarded2,," + format_number(summary.cost_rewarded2) + "\n";
      for (std::size_t r = 0; r < cost.per_repetition.size(); ++r) {
        fig4 += lv + ",coordinated," + std::to_string(r + 1) + "," +
                format_number(cost.per_repetition[r]) + "\n";
      }
      for (std::size_t r = 0; r < free.per_repetition.size(); ++r) {
        fig4 += lv + ",coordinated_free_intrinsic," + std::to_string(r + 1) + "," +
                format_number(free.per_repetition[r]) + "\n";
      }
      summary.goals.push_back(std::move(g));
    }

    std::string fig3a = "scenario_id";
    for (const auto& h : headers) fig3a += "," + h;
    fig3a += "\n";
    for (std::size_t j = 0; j < m; ++j) {
      fig3a += std::to_string(j + 1);
      for (const auto& col : columns) fig3a += "," + format_number(col[j]);
      fig3a += "\n";
    }

    std::string elements = "condition,criterion,element,actual,expected,reinforcement\n";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (headers[c] == "expected_intrinsic") continue;
      const auto rep = reinforcement(columns[c], catalog);
      for (std::size_t u = 0; u < catalog.num_criteria(); ++u) {
        const auto& crit = catalog.criteria()[u];
        for (std::size_t o = 0; o < crit.elements.size(); ++o) {
          const auto& rf = rep.reinforcement[u][o];
          elements += headers[c] + "," + crit.name + "," + crit.elements[o] + "," +
                      format_number(rep.actual[u][o]) + "," + format_number(rep.expected[u][o]) +
                      "," + (rf ? format_number(*rf) : std::string()) + "\n";
        }
      }
    }

    files["fig3a_privacy.csv"] = fig3a;
    files["fig3b_mismatch.csv"] = fig3b;
    files["fig4_costs.csv"] = fig4;
    files["elements.csv"] = elements;
  });

  Json conjoint_json = Json::object();
  stage("conjoint", [&] {
    const auto design = encode(catalog);
    const char* names[3] = {"intrinsic", "rewarded1", "rewarded2"};
    for (std::size_t c = 0; c < 3; ++c) {
      const auto snapshot = ConditionSnapshot::from_selections(names[c], selections[c]);
      const auto response = scenario_privacy(snapshot);
      const auto f = fit(design, response);
      const auto pw = partworths(f, design);
      if (c == 0) summary.intrinsic_intercept = f.intercept();
      files[std::string("conjoint/") + names[c] + "_coefficients.csv"] =
          io::format_coefficients(f, design);
      files[std::string("conjoint/") + names[c] + "_partworths.json"] =
          io::partworths_json(pw, catalog);
      conjoint_json[names[c]] = Json{{"intercept", number(f.intercept())},
                                     {"r_squared", number(f.r_squared)}};
    }

    // Behavioral groups from (intrinsic, rewarded) privacy per participant.
    if (people.records.size() >= config.clusters) {
      std::vector<Point> points;
      for (std::size_t a = 0; a < people.records.size(); ++a) {
        const double rewarded =
            (privacy_score(selections[1][a]) + privacy_score(selections[2][a])) / 2.0;
        points.push_back({privacy_score(selections[0][a]), rewarded});
      }
      const auto km = extract_groups(points, config.clusters, seeds.clustering);
      std::string groups = "participant_id,intrinsic_privacy,rewarded_privacy,cluster\n";
      for (std::size_t a = 0; a < points.size(); ++a) {
        groups += people.records[a].id + "," + format_number(points[a][0]) + "," +
                  format_number(points[a][1]) + "," + std::to_string(km.assignments[a]) + "\n";
      }
      files["groups.csv"] = groups;
    } else {
      summary.warnings.push_back("fewer participants than clusters; grouping skipped");
    }
  });

  // Report and manifest.
  Json report;
  report["participants"] = summary.participants;
  report["source"] = dataset ? "dataset" : "synthetic";
  report["reward_mode"] = to_string(config.reward_mode);
  report["alpha"] = number(config.weights.alpha);
  report["beta"] = number(config.weights.beta);
  report["privacy"] = Json{{"intrinsic", number(summary.privacy_intrinsic)},
                           {"rewarded1", number(summary.privacy_rewarded1)},
                           {"rewarded2", number(summary.privacy_rewarded2)}};
  report["collection_cost"] = Json{{"intrinsic", number(summary.cost_intrinsic)},
                                   {"rewarded1", number(summary.cost_rewarded1)},
                                   {"rewarded2", number(summary.cost_rewarded2)}};
  Json goals_json = Json::array();
  for (const auto& g : summary.goals) {
    goals_json.push_back(Json{
        {"goal_level", g.level},
        {"mismatch_mean_abs", Json{{"intrinsic", number(g.mismatch_intrinsic)},
                                   {"rewarded", number(g.mismatch_rewarded)},
                                   {"coordinated", number(g.mismatch_coordinated)}}},
        {"mismatch_rmse", Json{{"intrinsic", number(g.rmse_intrinsic)},
                               {"rewarded", number(g.rmse_rewarded)},
                               {"coordinated", number(g.rmse_coordinated)}}},
        {"coordinated_privacy", number(g.privacy_coordinated)},
        {"privacy_recovery_percent", optional_number(g.recovery)},
        {"coordinated_cost_mean", number(g.coordinated_cost_mean)},
        {"coordinated_cost_sd", number(g.coordinated_cost_sd)}});
  }
  report["goals"] = std::move(goals_json);
  report["conjoint"] = std::move(conjoint_json);
  report["warnings"] = summary.warnings;
  files["report.json"] = report.dump(2) + "\n";

  Json manifest;
  manifest["tool"] = "privcoord";
  manifest["version"] = kVersion;
  manifest["rng"] = kRngAlgorithm;
  manifest["config_hash"] = out.config_hash;
  manifest["config"] = config.canonical();
  Json seeds_json;
  seeds_json["master"] = seeds.master;
  seeds_json["population"] = seeds.population;
  seeds_json["clustering"] = seeds.clustering;
  for (const auto& [level, s] : seeds.coordination) {
    seeds_json["coordination_goal_" + std::to_string(level)] = s;
  }
  manifest["seeds"] = std::move(seeds_json);
  Json hashes = Json::object();
  for (const auto& [name, content] : files) hashes[name] = io::hex64(io::fnv1a(content));
  manifest["outputs"] = std::move(hashes);
  files["manifest.json"] = manifest.dump(2) + "\n";
  return out;
}

void write_outputs(const PipelineOutput& output, const std::filesystem::path& dir) {
  for (const auto& [name, content] : output.files) io::write_text(dir / name, content);
}

PipelineOutput run_pipeline(const ExperimentConfig& config) {
  auto out = compute_pipeline(config);
  stage("write", [&] { write_outputs(out, config.output_dir); });
  return out;
}

}  // namespace privcoord
