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

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "privcoord/population.hpp"
#include "privcoord/sharing_model.hpp"

namespace privcoord {

/// One canonical response: a participant's level for one scenario.
struct ResponseRow {
  std::string participant_id;
  Condition condition = Condition::Intrinsic;
  std::size_t scenario_id = 0;
  int selection = 0;
  std::optional<double> timestamp;
  std::size_t line = 0;
};

struct IngestIssue {
  std::string file;
  std::size_t line = 0;
  std::string message;
};

/// Maps the columns and condition codes of an external table onto the
/// canonical schema.
///
/// Config file: `key = value` lines with keys participant_id, condition,
/// scenario_id, selection, timestamp (column names), delimiter, strict,
/// levels, and `condition.<raw> = intrinsic|rewarded1|rewarded2`.
struct ColumnMapping {
  std::string participant_id = "participant_id";
  std::string condition = "condition";
  std::string scenario_id = "scenario_id";
  std::string selection = "selection";
  std::string timestamp = "timestamp";  // optional column
  std::map<std::string, std::string> condition_values;
  char delimiter = ',';
  // Strict ingestion throws on the first bad row; lenient collects issues.
  bool strict = true;
  int levels = kDefaultLevels;

  static ColumnMapping parse(std::string_view text);
  static ColumnMapping read(const std::filesystem::path& path);
};

struct DatasetBundle {
  std::vector<ResponseRow> responses;
  std::vector<WeightProfile> profiles;
  std::string provenance;
  int levels = kDefaultLevels;
  std::size_t duplicates = 0;
  std::vector<IngestIssue> issues;  // rows rejected in lenient mode
  std::vector<std::string> warnings;

  /// Participants in id order with the conditions whose m scenarios are all
  /// present. Incomplete conditions stay empty.
  std::vector<ParticipantRecord> records(const ScenarioCatalog& catalog) const;
};

/// Reads a responses table and, optionally, a profiles table.
///
/// Duplicate (participant, condition, scenario) rows keep the latest
/// timestamp (the later row on equal or missing timestamps) and are counted.
DatasetBundle ingest(const std::filesystem::path& responses,
                     const std::optional<std::filesystem::path>& profiles,
                     const ColumnMapping& mapping, const ScenarioCatalog& catalog);

/// Canonical responses CSV for the recorded conditions of each participant.
std::string format_responses(std::span<const ParticipantRecord> records);

}  // namespace privcoord
