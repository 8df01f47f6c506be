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

#include "privcoord/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "privcoord/errors.hpp"

namespace privcoord::io {

namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  for (const auto& f : split_csv_line(text, ',')) out.push_back(parse_double(f, what));
  return out;
}

Json number(double v) { return Json(round_output(v)); }

Json numbers(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double round_output(double value) { return std::strtod(format_number(value).c_str(), nullptr); }

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back(trim(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
  const auto text = read_text(path);
  CsvTable t;
  bool have_header = false;
  std::size_t n = 0;
  for (auto line : lines_of(text)) {
    ++n;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, delimiter);
    if (!have_header) {
      if (n == 1 && !fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) {
        fields[0].erase(0, 3);
      }
      t.header = std::move(fields);
      have_header = true;
    } else {
      t.rows.push_back(CsvRow{n, std::move(fields)});
    }
  }
  return t;
}

double parse_double(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput(std::string(what) + ": '" + std::string(s) + "' is not a number");
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view what) {
  const auto s = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInput(std::string(what) + ": '" + std::string(s) + "' is not an integer");
  }
  return v;
}

ScenarioCatalog parse_catalog(std::string_view text) {
  std::vector<Criterion> criteria;
  for (auto raw : lines_of(text)) {
    auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw InvalidInput("catalog: expected 'name: elements' but got '" + std::string(line) + "'");
    }
    Criterion c;
    c.name = std::string(trim(line.substr(0, colon)));
    for (auto& e : split_csv_line(line.substr(colon + 1), ',')) {
      if (!e.empty()) c.elements.push_back(e);
    }
    criteria.push_back(std::move(c));
  }
  return ScenarioCatalog::enumerate(std::move(criteria));
}

ScenarioCatalog read_catalog(const std::filesystem::path& path) {
  return parse_catalog(read_text(path));
}

std::string format_profiles(std::span<const WeightProfile> profiles,
                            const ScenarioCatalog& catalog) {
  std::string out = "participant_id";
  for (const auto& c : catalog.criteria()) out += "," + c.name;
  for (const auto& label : catalog.element_labels()) out += "," + label;
  out += '\n';
  for (const auto& p : profiles) {
    p.validate(catalog);
    out += p.participant_id;
    for (double w : p.criterion_weights) out += "," + format_number(w);
    for (const auto& row : p.element_weights) {
      for (double w : row) out += "," + format_number(w);
    }
    out += '\n';
  }
  return out;
}

std::vector<WeightProfile> read_profiles(const std::filesystem::path& path,
                                         const ScenarioCatalog& catalog) {
  const auto table = read_csv(path);
  const std::size_t k = catalog.num_criteria();
  const std::size_t width = 1 + k + catalog.num_elements();
  if (table.header.size() != width) {
    throw IngestError(path.string(), 1,
                      "profiles need " + std::to_string(width) + " columns, found " +
                          std::to_string(table.header.size()));
  }
  std::vector<WeightProfile> out;
  for (const auto& row : table.rows) {
    if (row.fields.size() != width) {
      throw IngestError(path.string(), row.line, "wrong number of columns");
    }
    try {
      WeightProfile p;
      p.participant_id = row.fields[0];
      std::size_t col = 1;
      for (std::size_t u = 0; u < k; ++u) {
        p.criterion_weights.push_back(parse_double(row.fields[col++], "criterion weight"));
      }
      for (const auto& c : catalog.criteria()) {
        std::vector<double> ws;
        for (std::size_t o = 0; o < c.elements.size(); ++o) {
          ws.push_back(parse_double(row.fields[col++], "element weight"));
        }
        p.element_weights.push_back(std::move(ws));
      }
      p.validate(catalog);
      out.push_back(std::move(p));
    } catch (const InvalidInput& e) {
      throw IngestError(path.string(), row.line, e.what());
    }
  }
  return out;
}

std::string format_portfolio(const PlanPortfolio& portfolio) {
  std::string out;
  for (const auto& plan : portfolio.plans) {
    if (!plan.label.empty()) out += "# label: " + plan.label + "\n";
    out += format_number(plan.local_cost) + ":";
    for (std::size_t j = 0; j < plan.values.size(); ++j) {
      if (j) out += ',';
      out += format_number(plan.values[j]);
    }
    out += '\n';
  }
  return out;
}

PlanPortfolio parse_portfolio(std::string_view text, std::string agent_id,
                              const std::string& source) {
  PlanPortfolio p;
  p.agent_id = std::move(agent_id);
  std::string pending_label;
  std::size_t n = 0;
  for (auto raw : lines_of(text)) {
    ++n;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = trim(line.substr(1));
      if (body.starts_with("label:")) pending_label = std::string(trim(body.substr(6)));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw IngestError(source, n, "plan line needs 'local_cost:values'");
    }
    Plan plan;
    try {
      plan.local_cost = parse_double(line.substr(0, colon), "local cost");
      plan.values = parse_list(line.substr(colon + 1), "plan value");
    } catch (const InvalidInput& e) {
      throw IngestError(source, n, e.what());
    }
    if (!p.plans.empty() && plan.values.size() != p.plans.front().values.size()) {
      throw IngestError(source, n, "plan length differs from the first plan");
    }
    plan.label = pending_label.empty() ? "plan" + std::to_string(p.plans.size() + 1) : pending_label;
    pending_label.clear();
    p.plans.push_back(std::move(plan));
  }
  if (p.plans.empty()) throw IngestError(source, n, "no plans");
  return p;
}

PlanPortfolio read_portfolio(const std::filesystem::path& path) {
  return parse_portfolio(read_text(path), path.stem().string(), path.string());
}

std::vector<PlanPortfolio> read_portfolio_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".plans") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<PlanPortfolio> out;
  for (const auto& f : files) out.push_back(read_portfolio(f));
  return out;
}

void write_portfolio_dir(const std::filesystem::path& dir,
                         std::span<const PlanPortfolio> portfolios) {
  for (const auto& p : portfolios) write_text(dir / (p.agent_id + ".plans"), format_portfolio(p));
}

std::string format_signal(std::span<const double> values) {
  std::string out = "scenario_id,value\n";
  for (std::size_t j = 0; j < values.size(); ++j) {
    out += std::to_string(j + 1) + "," + format_number(values[j]) + "\n";
  }
  return out;
}

std::vector<double> read_signal(const std::filesystem::path& path, std::size_t m) {
  const auto table = read_csv(path);
  std::vector<double> values;
  for (const auto& row : table.rows) {
    if (row.fields.size() != 2) throw IngestError(path.string(), row.line, "expected 2 columns");
    try {
      const auto id = parse_integer(row.fields[0], "scenario_id");
      if (id != static_cast<long long>(values.size() + 1)) {
        throw InvalidInput("scenario ids must run 1..m in order");
      }
      values.push_back(parse_double(row.fields[1], "value"));
    } catch (const InvalidInput& e) {
      throw IngestError(path.string(), row.line, e.what());
    }
  }
  if (values.size() != m) {
    throw InvalidInput(path.string() + ": signal has " + std::to_string(values.size()) +
                       " values, expected " + std::to_string(m));
  }
  return values;
}

std::string format_events(std::span<const ChoiceEvent> events) {
  std::string out = "participant_id,step,goal,scenario_id,option,rewards_after,privacy_after\n";
  for (const auto& e : events) {
    out += e.participant_id + "," + std::to_string(e.step) + "," + e.goal + "," +
           std::to_string(e.scenario_id) + "," + std::to_string(e.option) + "," +
           format_number(e.rewards_after) + "," + format_number(e.privacy_after) + "\n";
  }
  return out;
}

std::string format_coefficients(const RegressionFit& fit, const DesignMatrix& design) {
  std::string out = "term,coefficient\n";
  for (std::size_t i = 0; i < design.labels.size(); ++i) {
    out += design.labels[i] + "," +
           format_number(fit.coefficients[static_cast<Eigen::Index>(i)]) + "\n";
  }
  out += "r_squared," + format_number(fit.r_squared) + "\n";
  out += "adjusted_r_squared," + format_number(fit.adjusted_r_squared) + "\n";
  return out;
}

std::string partworths_json(const PartworthReport& report, const ScenarioCatalog& catalog) {
  Json j;
  j["degenerate"] = report.degenerate;
  Json criteria = Json::array();
  for (std::size_t u = 0; u < catalog.num_criteria() && !report.degenerate; ++u) {
    Json c;
    c["criterion"] = catalog.criteria()[u].name;
    c["utility"] = number(report.criterion_utilities[u]);
    Json elems = Json::array();
    for (std::size_t o = 0; o < catalog.criteria()[u].elements.size(); ++o) {
      elems.push_back(Json{{"element", catalog.criteria()[u].elements[o]},
                           {"within_criterion", number(report.within_criterion[u][o])},
                           {"across_criteria", number(report.across_criteria[u][o])}});
    }
    c["elements"] = std::move(elems);
    criteria.push_back(std::move(c));
  }
  j["criteria"] = std::move(criteria);
  return j.dump(2) + "\n";
}

std::string runs_json(std::span<const CoordinationRun> runs,
                      std::span<const PlanPortfolio> portfolios, const CostWeights& weights,
                      int goal_level) {
  Json j;
  j["goal_level"] = goal_level;
  j["alpha"] = number(weights.alpha);
  j["beta"] = number(weights.beta);
  Json reps = Json::array();
  for (const auto& run : runs) {
    Json r;
    r["repetition"] = run.repetition;
    r["topology_seed"] = run.topology_seed;
    r["cost_trace"] = numbers(run.cost_trace);
    Json sel = Json::object();
    for (std::size_t a = 0; a < portfolios.size(); ++a) {
      sel[portfolios[a].agent_id] = portfolios[a].plans.at(run.final_selection()[a]).label;
    }
    r["selections"] = std::move(sel);
    r["aggregate_response"] = numbers(run.final_response());
    reps.push_back(std::move(r));
  }
  j["runs"] = std::move(reps);
  return j.dump(2) + "\n";
}

std::string runs_csv(std::span<const CoordinationRun> runs) {
  std::string out = "repetition,iteration,cost\n";
  for (const auto& run : runs) {
    for (std::size_t t = 0; t < run.cost_trace.size(); ++t) {
      out += std::to_string(run.repetition) + "," + std::to_string(t + 1) + "," +
             format_number(run.cost_trace[t]) + "\n";
    }
  }
  return out;
}

PopulationSpec parse_population_spec(std::string_view text) {
  PopulationSpec spec;
  struct Override {
    std::string key;
    std::string value;
  };
  std::vector<Override> overrides;
  for (auto raw : lines_of(text)) {
    const auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidInput("population spec: expected 'key = value' but got '" + std::string(line) +
                         "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key == "n") {
      const auto n = parse_integer(value, key);
      if (n < 1) throw InvalidInput("population spec: n must be at least 1");
      spec.n = static_cast<std::size_t>(n);
    } else if (key == "mix") {
      const auto shares = parse_list(value, key);
      if (shares.size() != kNumGroups) throw InvalidInput("population spec: mix needs 5 shares");
      std::copy(shares.begin(), shares.end(), spec.mix.fractions.begin());
    } else if (key == "z") {
      spec.z = static_cast<int>(parse_integer(value, key));
      if (spec.z < 2) throw InvalidInput("population spec: z must be at least 2");
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "steps") {
      spec.steps = static_cast<std::size_t>(parse_integer(value, key));
    } else if (key == "sensitivity") {
      spec.sensitivity = parse_double(value, key);
    } else if (key.find('.') != std::string::npos) {
      overrides.push_back({key, value});
    } else {
      throw InvalidInput("population spec: unknown key '" + key + "'");
    }
  }
  spec.behaviors = PopulationSpec::default_behaviors(spec.z);
  for (const auto& o : overrides) {
    const auto dot = o.key.find('.');
    auto& b = spec.behaviors[static_cast<std::size_t>(group_from_string(o.key.substr(0, dot)))];
    const auto field = o.key.substr(dot + 1);
    if (field == "intrinsic") {
      b.intrinsic_policy = parse_list(o.value, o.key);
    } else if (field == "rewarded") {
      b.rewarded_policy = parse_list(o.value, o.key);
    } else if (field == "drift") {
      b.drift = parse_double(o.value, o.key);
    } else {
      throw InvalidInput("population spec: unknown key '" + o.key + "'");
    }
  }
  for (const auto& b : spec.behaviors) b.validate(spec.z);
  spec.mix.normalized();
  return spec;
}

PopulationSpec read_population_spec(const std::filesystem::path& path) {
  return parse_population_spec(read_text(path));
}

std::string format_population_spec(const PopulationSpec& spec) {
  auto list = [](std::span<const double> v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
    return s;
  };
  std::string out;
  out += "n = " + std::to_string(spec.n) + "\n";
  out += "mix = " + list(spec.mix.fractions) + "\n";
  out += "z = " + std::to_string(spec.z) + "\n";
  out += "seed = " + std::to_string(spec.seed) + "\n";
  out += "steps = " + std::to_string(spec.steps) + "\n";
  out += "sensitivity = " + format_number(spec.sensitivity) + "\n";
  for (const auto& b : spec.behaviors) {
    const std::string g = to_string(b.kind);
    out += g + ".intrinsic = " + list(b.intrinsic_policy) + "\n";
    out += g + ".rewarded = " + list(b.rewarded_policy) + "\n";
    out += g + ".drift = " + format_number(b.drift) + "\n";
  }
  return out;
}

}  // namespace privcoord::io
