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

#include "aqua/agent/types.hpp"

#include <regex>

#include "aqua/core/error.hpp"
#include "aqua/core/test_case_io.hpp"

namespace aqua::agent {
namespace {

using nlohmann::json;

json opt(const std::optional<std::string>& v) { return v ? json(*v) : json(); }

std::optional<std::string> opt_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

json usage_json(const llm::Usage& u) {
  return {{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
}

llm::Usage usage_from(const json& j) {
  return {j.at("prompt_tokens").get<std::int64_t>(), j.at("completion_tokens").get<std::int64_t>()};
}

GuardrailReason parse_reason(std::string_view s) {
  for (auto r : {GuardrailReason::max_tokens, GuardrailReason::max_time, GuardrailReason::max_steps,
                 GuardrailReason::reasoning_loop})
    if (to_string(r) == s) return r;
  throw SchemaError("guardrail_trip.reason", "unknown reason '" + std::string(s) + "'");
}

std::string_view to_string(CheckpointStatus s) {
  switch (s) {
    case CheckpointStatus::held: return "held";
    case CheckpointStatus::failed: return "failed";
    case CheckpointStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

CheckpointStatus parse_checkpoint_status(std::string_view s) {
  for (auto c : {CheckpointStatus::held, CheckpointStatus::failed, CheckpointStatus::inconclusive})
    if (to_string(c) == s) return c;
  throw SchemaError("checkpoints.status", "unknown status '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::passed: return "passed";
    case VerdictStatus::failed: return "failed";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

VerdictStatus parse_verdict_status(std::string_view text) {
  for (auto s : {VerdictStatus::passed, VerdictStatus::failed, VerdictStatus::inconclusive})
    if (to_string(s) == text) return s;
  throw SchemaError("status", "unknown verdict status '" + std::string(text) + "'");
}

std::string_view to_string(VerdictSource source) {
  return source == VerdictSource::agent_self_report ? "agent_self_report" : "harness_checkpoints";
}

std::string_view to_string(GuardrailReason reason) {
  switch (reason) {
    case GuardrailReason::max_tokens: return "max_tokens";
    case GuardrailReason::max_time: return "max_time";
    case GuardrailReason::max_steps: return "max_steps";
    case GuardrailReason::reasoning_loop: return "reasoning_loop";
  }
  return "max_steps";
}

std::optional<Verdict> parse_verdict_line(std::string_view text) {
  static const std::regex kLine(R"(^\s*(.+?):\s*(passed|failed)(?:\s+and\s+step\s+(.*?))?\s*$)");
  const auto nl = text.find('\n');
  const std::string first(text.substr(0, nl));
  std::smatch m;
  if (!std::regex_match(first, m, kLine)) return std::nullopt;
  Verdict v;
  v.source = VerdictSource::agent_self_report;
  v.status = m[2] == "passed" ? VerdictStatus::passed : VerdictStatus::failed;
  if (m[3].matched && m[3].length() > 0) v.failing_step = m[3].str();
  if (nl != std::string_view::npos) {
    auto rest = std::string(text.substr(nl + 1));
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.erase(rest.begin());
    v.root_cause = rest;
  }
  if (v.status == VerdictStatus::failed && !v.failing_step && v.root_cause.empty())
    v.root_cause = "agent reported failure without details";
  return v;
}

json to_json(const TraceEvent& e) {
  return {{"step_number", e.step_number},
          {"thought", e.thought},
          {"action", aqua::to_json(e.action)},
          {"case_step", e.case_step ? json(*e.case_step) : json()},
          {"model", e.model},
          {"observation_digest", e.observation_digest},
          {"outcome", browser::to_string(e.outcome)},
          {"usage_delta", usage_json(e.usage_delta)},
          {"elapsed_ms", e.elapsed_ms},
          {"observation", browser::to_json(e.observation)}};
}

TraceEvent trace_event_from_json(const json& j) {
  try {
    TraceEvent e;
    e.step_number = j.at("step_number").get<int>();
    e.thought = j.at("thought").get<std::string>();
    e.action = action_from_json(j.at("action"), "action");
    if (const auto& cs = j.at("case_step"); !cs.is_null()) e.case_step = cs.get<int>();
    e.model = j.at("model").get<std::string>();
    e.observation_digest = j.at("observation_digest").get<std::string>();
    e.outcome = browser::parse_action_outcome(j.at("outcome").get<std::string>());
    e.usage_delta = usage_from(j.at("usage_delta"));
    e.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
    e.observation = browser::observation_from_json(j.at("observation"));
    return e;
  } catch (const json::exception& ex) {
    throw SchemaError("trace_event", ex.what());
  }
}

json to_json(const Verdict& v) {
  return {{"status", to_string(v.status)},
          {"failing_step", opt(v.failing_step)},
          {"root_cause", v.root_cause},
          {"source", to_string(v.source)}};
}

Verdict verdict_from_json(const json& j) {
  try {
    Verdict v;
    v.status = parse_verdict_status(j.at("status").get<std::string>());
    v.failing_step = opt_string(j, "failing_step");
    v.root_cause = j.at("root_cause").get<std::string>();
    v.source = j.at("source").get<std::string>() == "agent_self_report" ? VerdictSource::agent_self_report
                                                                          : VerdictSource::harness_checkpoints;
    return v;
  } catch (const json::exception& ex) {
    throw SchemaError("verdict", ex.what());
  }
}

json to_json(const ExecutionRecord& r) {
  json events = json::array();
  for (const auto& e : r.events) events.push_back(to_json(e));
  json checkpoints = json::array();
  for (const auto& c : r.checkpoints)
    checkpoints.push_back({{"expectation_index", c.expectation_index}, {"status", to_string(c.status)}, {"detail", c.detail}});
  return {{"case_id", r.case_id},
          {"flow_name", r.flow_name},
          {"roles", {{"planner", r.roles.planner}, {"executor", r.roles.executor}}},
          {"events", events},
          {"agent_verdict", r.agent_verdict ? to_json(*r.agent_verdict) : json()},
          {"harness_verdict", to_json(r.harness_verdict)},
          {"final_verdict", to_json(r.final_verdict)},
          {"disagreement", r.disagreement},
          {"checkpoints", checkpoints},
          {"guardrail_trip", r.guardrail_trip ? json{{"reason", to_string(r.guardrail_trip->reason)},
                                                     {"at_step", r.guardrail_trip->at_step}}
                                              : json()},
          {"error", opt(r.error)},
          {"selector_log", r.selector_log},
          {"totals", usage_json(r.totals)},
          {"wall_ms", r.wall_ms}};
}

ExecutionRecord execution_record_from_json(const json& j) {
  try {
    ExecutionRecord r;
    r.case_id = j.at("case_id").get<std::string>();
    r.flow_name = j.at("flow_name").get<std::string>();
    r.roles = {j.at("roles").at("planner").get<std::string>(), j.at("roles").at("executor").get<std::string>()};
    for (const auto& e : j.at("events")) r.events.push_back(trace_event_from_json(e));
    if (const auto& a = j.at("agent_verdict"); !a.is_null()) r.agent_verdict = verdict_from_json(a);
    r.harness_verdict = verdict_from_json(j.at("harness_verdict"));
    r.final_verdict = verdict_from_json(j.at("final_verdict"));
    r.disagreement = j.at("disagreement").get<bool>();
    for (const auto& c : j.at("checkpoints")) {
      r.checkpoints.push_back({c.at("expectation_index").get<std::size_t>(),
                               parse_checkpoint_status(c.at("status").get<std::string>()),
                               c.at("detail").get<std::string>()});
    }
    if (const auto& t = j.at("guardrail_trip"); !t.is_null())
      r.guardrail_trip = GuardrailTrip{parse_reason(t.at("reason").get<std::string>()), t.at("at_step").get<int>()};
    r.error = opt_string(j, "error");
    r.selector_log = j.at("selector_log").get<std::vector<std::string>>();
    r.totals = usage_from(j.at("totals"));
    r.wall_ms = j.at("wall_ms").get<std::int64_t>();
    return r;
  } catch (const json::exception& ex) {
    throw SchemaError("execution_record", ex.what());
  }
}

std::string trace_jsonl(const ExecutionRecord& record) {
  std::string out;
  for (const auto& e : record.events) out += to_json(e).dump() + "\n";
  return out;
}

}  // namespace aqua::agent
