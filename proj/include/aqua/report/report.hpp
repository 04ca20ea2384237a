// Copyright 2026 The Aqua Authors
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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/agent/types.hpp"
#include "aqua/generation/generator.hpp"
#include "aqua/llm/cost.hpp"
#include "aqua/quality/mutation.hpp"
#include "aqua/util/rational.hpp"

namespace aqua::report {

inline constexpr std::string_view kReportSchema = "aqua.report/1";

// "planner" when both roles use one model, else "planner+executor".
std::string model_key(const agent::ModelRoles& roles);

// Repeated executions of one flow with one model set.
struct RunSet {
  std::string flow;
  std::string model;
  agent::VerdictStatus expected = agent::VerdictStatus::passed;
  std::vector<agent::ExecutionRecord> records;

  // Throws SchemaError when empty, when a record belongs to another flow or
  // model, or when the expectation is inconclusive.
  void validate() const;
};

struct FlakinessEntry {
  std::string flow;
  std::string model;
  std::int64_t n = 0;
  std::int64_t unexpected = 0;
  Rational rate{0};

  friend bool operator==(const FlakinessEntry&, const FlakinessEntry&) = default;
};

// unexpected = records whose final status differs from the expectation;
// inconclusive always counts.
FlakinessEntry flaky_rate(const RunSet& runs);

// Group records by (case id, model key). Mutants are expected to fail, every
// other case to pass. Order follows first appearance.
std::vector<RunSet> group_records(std::span<const agent::ExecutionRecord> records);

// One story's generated suite.
struct GenerationEvidence {
  std::string model;
  std::string story_id;
  std::int64_t ac_total = 0;
  std::int64_t ac_covered = 0;
  std::int64_t cases = 0;
  std::int64_t executable_cases = 0;
  llm::Usage usage;

  friend bool operator==(const GenerationEvidence&, const GenerationEvidence&) = default;
};

// Executable cases are those the judge accepted, or every case when the suite
// was not judged.
GenerationEvidence generation_evidence(const std::string& model, const UserStory& story,
                                       const generation::GeneratedSuite& suite);

nlohmann::json to_json(const GenerationEvidence& e);
GenerationEvidence generation_evidence_from_json(const nlohmann::json& j);

struct GenerationRow {
  std::string model;
  std::int64_t stories = 0;
  std::optional<Rational> ac_coverage;  // covered / total over all stories
  std::int64_t executable_cases = 0;
  std::int64_t cases = 0;
  llm::Usage usage;
  std::optional<llm::Currency> cost;  // absent: model missing from the rate table

  friend bool operator==(const GenerationRow&, const GenerationRow&) = default;
};

struct ExecutionRow {
  std::string flow;
  std::string flow_name;
  std::string model;
  FlakinessEntry flakiness;
  Rational avg_time_ms{0};  // summed event time, simulated in hermetic runs
  Rational avg_tokens{0};
  std::optional<llm::Currency> avg_cost;
  std::map<std::string, std::int64_t> guardrail_trips;  // reason -> runs

  friend bool operator==(const ExecutionRow&, const ExecutionRow&) = default;
};

struct MutationSummary {
  std::int64_t mutants = 0;
  std::int64_t caught = 0;
  std::int64_t corrected = 0;
  std::int64_t disagreements = 0;

  std::optional<Rational> caught_rate() const;
  std::optional<Rational> corrected_rate() const;

  friend bool operator==(const MutationSummary&, const MutationSummary&) = default;
};

struct SuiteReport {
  std::vector<GenerationRow> generation;
  std::vector<ExecutionRow> execution;
  std::int64_t total_runs = 0;
  std::int64_t total_unexpected = 0;
  std::optional<Rational> aggregate_flaky;  // absent without runs
  MutationSummary mutation;
  std::vector<std::string> trace_index;

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

struct ReportInputs {
  std::vector<RunSet> run_sets;
  std::vector<GenerationEvidence> generation;
  std::vector<quality::MutationAudit> audits;
  std::vector<std::string> trace_index;
};

// Costs of a record sum every event at the rate of the model that produced
// it; one unknown model makes the whole cell unavailable.
SuiteReport aggregate(const ReportInputs& inputs, const llm::RateTable& rates);

nlohmann::json to_json(const SuiteReport& report);
SuiteReport suite_report_from_json(const nlohmann::json& j);

std::string render_machine(const SuiteReport& report);
std::string render_markdown(const SuiteReport& report);

}  // namespace aqua::report
