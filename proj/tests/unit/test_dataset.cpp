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

using namespace privcoord;
namespace fs = std::filesystem;

namespace {

const ScenarioCatalog& catalog() {
  static const auto cat = ScenarioCatalog::default_catalog();
  return cat;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto dir = fs::temp_directory_path() / "privcoord_dataset";
  fs::create_directories(dir);
  io::write_text(dir / name, text);
  return dir / name;
}

}  // namespace

TEST_CASE("empty responses file gives a warning") {
  const auto b = ingest(write("empty.csv", ""), std::nullopt, ColumnMapping{}, catalog());
  CHECK(b.responses.empty());
  CHECK(b.warnings.size() == 1);
  const auto h = ingest(write("header.csv", "participant_id,condition,scenario_id,selection\n"),
                        std::nullopt, ColumnMapping{}, catalog());
  CHECK(h.responses.empty());
  CHECK_FALSE(h.warnings.empty());
}

TEST_CASE("latest timestamp wins") {
  const auto path = write("dups.csv",
                          "participant_id,condition,scenario_id,selection,timestamp\n"
                          "p1,intrinsic,3,2,10\n"
                          "p1,intrinsic,3,5,30\n"
                          "p1,intrinsic,3,4,20\n"
                          "p1,rewarded1,3,1,5\n");
  const auto b = ingest(path, std::nullopt, ColumnMapping{}, catalog());
  CHECK(b.duplicates == 2);
  REQUIRE(b.responses.size() == 2);
  CHECK(b.responses[0].selection == 5);
}

TEST_CASE("strict and lenient validation") {
  const auto path = write("bad.csv",
                          "participant_id,condition,scenario_id,selection\n"
                          "p1,intrinsic,3,2\n"
                          "p1,intrinsic,4,9\n"
                          "p1,intrinsic,65,1\n");
  try {
    ingest(path, std::nullopt, ColumnMapping{}, catalog());
    FAIL("expected an ingest error");
  } catch (const IngestError& e) {
    CHECK(e.line() == 3);
  }
  ColumnMapping lenient;
  lenient.strict = false;
  const auto b = ingest(path, std::nullopt, lenient, catalog());
  CHECK(b.responses.size() == 1);
  REQUIRE(b.issues.size() == 2);
  CHECK(b.issues[0].line == 3);
  CHECK(b.issues[1].line == 4);
}

TEST_CASE("unmapped required column") {
  const auto path = write("cols.csv", "pid,condition,scenario_id,selection\np1,intrinsic,1,1\n");
  CHECK_THROWS_AS(ingest(path, std::nullopt, ColumnMapping{}, catalog()), IngestError);
  const auto m = ColumnMapping::parse("participant_id = pid\ncondition.day0 = intrinsic\n");
  CHECK_NOTHROW(ingest(path, std::nullopt, m, catalog()));
}

TEST_CASE("mapping config") {
  const auto m = ColumnMapping::parse(
      "participant_id = user\nselection = level\ndelimiter = ;\nstrict = false\n"
      "condition.D1 = rewarded1\n");
  CHECK(m.participant_id == "user");
  CHECK(m.selection == "level");
  CHECK(m.delimiter == ';');
  CHECK_FALSE(m.strict);
  CHECK(m.condition_values.at("D1") == "rewarded1");
  CHECK_THROWS_AS(ColumnMapping::parse("condition.D1 = holiday\n"), InvalidInput);
  CHECK_THROWS_AS(ColumnMapping::parse("nonsense = 1\n"), InvalidInput);

  const auto path = write("semi.csv", "user;condition;scenario_id;level\nu;D1;2;3\n");
  const auto b = ingest(path, std::nullopt, m, catalog());
  REQUIRE(b.responses.size() == 1);
  CHECK(b.responses[0].condition == Condition::Rewarded1);
}

TEST_CASE("simulated choices survive export and ingest") {
  const auto pop = generate_population(12, GroupMix::standard(), 31, catalog());
  SimulationSettings settings;
  std::vector<ParticipantRecord> records;
  for (const auto& p : pop.participants) {
    ParticipantRecord r;
    r.id = p.profile.participant_id;
    for (auto c : kAllConditions) {
      r.conditions[static_cast<std::size_t>(c)] =
          simulate_condition(p, pop.behaviors[static_cast<std::size_t>(p.group)], c, catalog(), settings)
              .selection;
    }
    records.push_back(r);
  }
  const auto path = write("roundtrip.csv", format_responses(records));
  const auto back = ingest(path, std::nullopt, ColumnMapping{}, catalog()).records(catalog());
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].id == records[i].id);
    for (auto c : kAllConditions) CHECK(back[i].at(c).levels == records[i].at(c).levels);
  }
}

TEST_CASE("incomplete conditions stay empty") {
  const auto path = write("partial.csv",
                          "participant_id,condition,scenario_id,selection\np1,intrinsic,1,2\n");
  const auto recs = ingest(path, std::nullopt, ColumnMapping{}, catalog()).records(catalog());
  REQUIRE(recs.size() == 1);
  CHECK_FALSE(recs[0].conditions[0].has_value());
  CHECK_THROWS_AS(build_portfolio(recs[0]), IncompletePortfolio);
}
