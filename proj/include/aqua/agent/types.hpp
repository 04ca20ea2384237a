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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/browser/observation.hpp"
#include "aqua/core/model.hpp"
#include "aqua/llm/types.hpp"

namespace aqua::agent {

struct AgentAction {
  Action action;
  std::string thought;
  // Case step the agent says it is working on, if any.
  std::optional<int> step;

  friend bool operator==(const AgentAction&, const AgentAction&) = default;
};

struct TraceEvent {
  int step_number = 0;
  std::string thought;
  Action action;
  std::optional<int> case_step;
  std::string model;
  std::string observation_digest;  // of the observation after the action
  browser::ActionOutcome outcome = browser::ActionOutcome::ok;
  llm::Usage usage_delta;
  std::int64_t elapsed_ms = 0;
  browser::Observation observation;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class VerdictStatus { passed, failed, inconclusive };
enum class VerdictSource { harness_checkpoints, agent_self_report };

std::string_view to_string(VerdictStatus status);
VerdictStatus parse_verdict_status(std::string_view text);
std::string_view to_string(VerdictSource source);

struct Verdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  std::optional<std::string> failing_step;
  std::string root_cause;
  VerdictSource source = VerdictSource::harness_checkpoints;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Parses "Flow name: passed" or "Flow name: failed[ and step ...]", with an
// optional root cause on the following lines. Returns nullopt when the first
// line does not match.
std::optional<Verdict> parse_verdict_line(std::string_view text);

enum class GuardrailReason { max_tokens, max_time, max_steps, reasoning_loop };

std::string_view to_string(GuardrailReason reason);

struct GuardrailTrip {
  GuardrailReason reason = GuardrailReason::max_steps;
  int at_step = 0;

  friend bool operator==(const GuardrailTrip&, const GuardrailTrip&) = default;
};

struct ModelRoles {
  std::string planner;
  std::string executor;

  friend bool operator==(const ModelRoles&, const ModelRoles&) = default;
};

enum class CheckpointStatus { held, failed, inconclusive };

struct CheckpointResult {
  std::size_t expectation_index = 0;
  CheckpointStatus status = CheckpointStatus::inconclusive;
  std::string detail;

  friend bool operator==(const CheckpointResult&, const CheckpointResult&) = default;
};

struct ExecutionRecord {
  std::string case_id;
  std::string flow_name;
  ModelRoles roles;
  std::vector<TraceEvent> events;
  std::optional<Verdict> agent_verdict;
  Verdict harness_verdict;
  Verdict final_verdict;
  bool disagreement = false;
  std::vector<CheckpointResult> checkpoints;
  std::optional<GuardrailTrip> guardrail_trip;
  // Provider or planning failure that ended the run.
  std::optional<std::string> error;
  std::vector<std::string> selector_log;
  llm::Usage totals;
  std::int64_t wall_ms = 0;

  friend bool operator==(const ExecutionRecord&, const ExecutionRecord&) = default;
};

nlohmann::json to_json(const TraceEvent& event);
TraceEvent trace_event_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Verdict& verdict);
Verdict verdict_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExecutionRecord& record);
ExecutionRecord execution_record_from_json(const nlohmann::json& j);

// One JSON line per event.
std::string trace_jsonl(const ExecutionRecord& record);

}  // namespace aqua::agent
