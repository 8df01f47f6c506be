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

#include "privcoord/dataset.hpp"

#include <algorithm>
#include <tuple>

#include "privcoord/errors.hpp"
#include "privcoord/io.hpp"

namespace privcoord {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<std::size_t> column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

ColumnMapping ColumnMapping::parse(std::string_view text) {
  ColumnMapping m;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    line = line.substr(0, line.find('#'));
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) throw InvalidInput("mapping: expected 'key = value'");
    auto fields = io::split_csv_line(line.substr(0, eq) + "," + line.substr(eq + 1), ',');
    const std::string key = fields[0];
    const std::string value = fields.size() > 1 ? fields[1] : "";
    if (key == "participant_id") {
      m.participant_id = value;
    } else if (key == "condition") {
      m.condition = value;
    } else if (key == "scenario_id") {
      m.scenario_id = value;
    } else if (key == "selection") {
      m.selection = value;
    } else if (key == "timestamp") {
      m.timestamp = value;
    } else if (key == "delimiter") {
      if (value == "tab" || value == "\\t") {
        m.delimiter = '\t';
      } else if (value.size() == 1) {
        m.delimiter = value[0];
      } else {
        throw InvalidInput("mapping: delimiter must be one character or 'tab'");
      }
    } else if (key == "strict") {
      m.strict = value == "true" || value == "1";
    } else if (key == "levels") {
      m.levels = static_cast<int>(io::parse_integer(value, key));
    } else if (key.starts_with("condition.")) {
      condition_from_string(value);
      m.condition_values[key.substr(10)] = value;
    } else {
      throw InvalidInput("mapping: unknown key '" + key + "'");
    }
  }
  return m;
}

ColumnMapping ColumnMapping::read(const std::filesystem::path& path) {
  return parse(io::read_text(path));
}

DatasetBundle ingest(const std::filesystem::path& responses,
                     const std::optional<std::filesystem::path>& profiles,
                     const ColumnMapping& mapping, const ScenarioCatalog& catalog) {
  DatasetBundle bundle;
  bundle.levels = mapping.levels;
  const std::string file = responses.string();
  bundle.provenance = "responses: " + responses.filename().string();
  const auto table = io::read_csv(responses, mapping.delimiter);

  if (table.header.empty()) {
    bundle.warnings.push_back(file + ": empty responses file");
  } else {
    const auto pid = column(table.header, mapping.participant_id);
    const auto cond = column(table.header, mapping.condition);
    const auto sid = column(table.header, mapping.scenario_id);
    const auto sel = column(table.header, mapping.selection);
    const auto ts = column(table.header, mapping.timestamp);
    for (const auto& [col, name] : {std::pair{pid, mapping.participant_id},
                                    std::pair{cond, mapping.condition},
                                    std::pair{sid, mapping.scenario_id},
                                    std::pair{sel, mapping.selection}}) {
      if (!col) throw IngestError(file, 1, "required column '" + name + "' is not mapped");
    }
    if (table.rows.empty()) bundle.warnings.push_back(file + ": no response rows");

    for (const auto& row : table.rows) {
      try {
        if (row.fields.size() != table.header.size()) {
          throw InvalidInput("expected " + std::to_string(table.header.size()) +
                             " fields, found " + std::to_string(row.fields.size()));
        }
        ResponseRow r;
        r.line = row.line;
        r.participant_id = row.fields[*pid];
        if (r.participant_id.empty()) throw InvalidInput("empty participant id");
        const auto& raw = row.fields[*cond];
        const auto mapped = mapping.condition_values.find(raw);
        r.condition = condition_from_string(
            mapped != mapping.condition_values.end() ? mapped->second : lower(raw));
        const auto id = io::parse_integer(row.fields[*sid], "scenario_id");
        if (id < 1 || id > static_cast<long long>(catalog.size())) {
          throw InvalidInput("scenario_id " + std::to_string(id) + " outside 1.." +
                             std::to_string(catalog.size()));
        }
        r.scenario_id = static_cast<std::size_t>(id);
        const auto level = io::parse_integer(row.fields[*sel], "selection");
        if (level < 1 || level > mapping.levels) {
          throw InvalidInput("selection " + std::to_string(level) + " outside 1.." +
                             std::to_string(mapping.levels));
        }
        r.selection = static_cast<int>(level);
        if (ts && !row.fields[*ts].empty()) r.timestamp = io::parse_double(row.fields[*ts], "timestamp");
        bundle.responses.push_back(std::move(r));
      } catch (const InvalidInput& e) {
        if (mapping.strict) throw IngestError(file, row.line, e.what());
        bundle.issues.push_back(IngestIssue{file, row.line, e.what()});
      }
    }
  }

  // Latest timestamp wins; file order breaks ties.
  auto key = [](const ResponseRow& r) {
    return std::tuple(r.participant_id, static_cast<int>(r.condition), r.scenario_id);
  };
  std::stable_sort(bundle.responses.begin(), bundle.responses.end(),
                   [&](const ResponseRow& a, const ResponseRow& b) {
                     if (key(a) != key(b)) return key(a) < key(b);
                     return a.timestamp.value_or(-INFINITY) < b.timestamp.value_or(-INFINITY);
                   });
  std::vector<ResponseRow> unique;
  for (auto& r : bundle.responses) {
    if (!unique.empty() && key(unique.back()) == key(r)) {
      unique.back() = std::move(r);
      ++bundle.duplicates;
    } else {
      unique.push_back(std::move(r));
    }
  }
  bundle.responses = std::move(unique);
  if (!bundle.issues.empty()) {
    bundle.warnings.push_back(std::to_string(bundle.issues.size()) + " rows rejected");
  }
  if (bundle.duplicates > 0) {
    bundle.warnings.push_back(std::to_string(bundle.duplicates) + " duplicate rows overwritten");
  }

  if (profiles) {
    bundle.profiles = io::read_profiles(*profiles, catalog);
    bundle.provenance += "; profiles: " + profiles->filename().string();
  }
  return bundle;
}

std::vector<ParticipantRecord> DatasetBundle::records(const ScenarioCatalog& catalog) const {
  const std::size_t m = catalog.size();
  std::map<std::string, std::array<std::vector<int>, 3>> by_participant;
  for (const auto& r : responses) {
    auto& slot = by_participant[r.participant_id][static_cast<std::size_t>(r.condition)];
    if (slot.empty()) slot.assign(m, 0);
    slot[r.scenario_id - 1] = r.selection;
  }
  std::vector<ParticipantRecord> out;
  for (const auto& [id, conditions] : by_participant) {
    ParticipantRecord rec;
    rec.id = id;
    for (std::size_t c = 0; c < 3; ++c) {
      const auto& v = conditions[c];
      if (v.size() == m && std::find(v.begin(), v.end(), 0) == v.end()) {
        rec.conditions[c] = SelectionVector{v, levels};
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string format_responses(std::span<const ParticipantRecord> records) {
  std::string out = "participant_id,condition,scenario_id,selection\n";
  for (const auto& rec : records) {
    for (auto c : kAllConditions) {
      const auto& s = rec.conditions[static_cast<std::size_t>(c)];
      if (!s) continue;
      for (std::size_t j = 0; j < s->size(); ++j) {
        out += rec.id + "," + to_string(c) + "," + std::to_string(j + 1) + "," +
               std::to_string(s->levels[j]) + "\n";
      }
    }
  }
  return out;
}

}  // namespace privcoord
