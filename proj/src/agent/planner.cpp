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

#include "aqua/agent/planner.hpp"

#include <algorithm>

#include "aqua/core/test_case_io.hpp"
#include "aqua/core/validation.hpp"
#include "aqua/generation/generator.hpp"

namespace aqua::agent {
namespace {

using nlohmann::json;

constexpr std::string_view kStateHeader = "Current state:\n";

Action resolved(const Action& a, const std::map<std::string, std::string>& data) {
  Action out = a;
  out.target = resolve_placeholders(a.target, data);
  if (out.value) out.value = resolve_placeholders(*out.value, data);
  return out;
}

json reply_action_json(const Action& a) { return aqua::to_json(a); }

std::optional<json> parse_object(std::string_view text) {
  auto j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

std::string render_agent_system(const TestCase& tc, const generation::PromptTemplates& templates) {
  std::string steps;
  for (const auto& s : tc.steps) steps += std::to_string(s.index) + ". " + resolve_placeholders(s.instruction, tc.test_data) + "\n";
  std::string expected;
  for (const auto& e : tc.expected_results) expected += "- " + resolve_placeholders(e.text, tc.test_data) + "\n";
  if (!steps.empty()) steps.pop_back();
  if (!expected.empty()) expected.pop_back();
  return generation::render_template(templates.agent_system,
                                     {{"flow_name", tc.title}, {"steps", steps}, {"expected_results", expected}});
}

json agent_state(const PlannerInput& input, std::size_t history_window) {
  const auto& tc = *input.test_case;
  json steps = json::array();
  for (const auto& s : tc.steps) {
    steps.push_back({{"index", s.index},
                     {"instruction", resolve_placeholders(s.instruction, tc.test_data)},
                     {"hint", s.action_hint ? reply_action_json(resolved(*s.action_hint, tc.test_data)) : json()}});
  }
  json expected = json::array();
  for (const auto& e : tc.expected_results) {
    json a;
    if (e.assertion) {
      auto copy = *e.assertion;
      copy.operand = resolve_placeholders(copy.operand, tc.test_data);
      a = aqua::to_json(copy);
    }
    expected.push_back({{"text", e.text}, {"assertion", a}});
  }
  json history = json::array();
  const auto first = input.trace.size() > history_window ? input.trace.size() - history_window : 0;
  for (auto i = first; i < input.trace.size(); ++i) {
    const auto& e = input.trace[i];
    history.push_back({{"event", e.step_number},
                       {"step", e.case_step ? json(*e.case_step) : json()},
                       {"action", reply_action_json(e.action)},
                       {"outcome", browser::to_string(e.outcome)},
                       {"url", e.observation.url}});
  }
  return {{"case",
           {{"id", tc.id}, {"title", tc.title}, {"test_data", tc.test_data}, {"steps", steps}, {"expected_results", expected}}},
          {"history", history},
          {"observation", browser::to_json(*input.observation)},
          {"divergence", input.divergence ? json(*input.divergence) : json()},
          {"remaining_steps", input.remaining_steps}};
}

std::string agent_state_message(const PlannerInput& input, std::size_t history_window) {
  return std::string(kStateHeader) + "```json\n" + agent_state(input, history_window).dump(1) + "\n```\n" +
         "Reply with the next action.";
}

std::optional<json> parse_agent_state(std::string_view message) {
  for (const auto& block : generation::extract_fenced_blocks(message)) {
    if (auto j = parse_object(block); j && j->contains("case") && j->contains("observation")) return j;
  }
  return std::nullopt;
}

llm::ChatRequest build_plan_request(const PlannerInput& input, const generation::PromptTemplates& templates,
                                    const PlannerOptions& options) {
  llm::ChatRequest req;
  req.model = options.model;
  req.temperature = options.temperature;
  req.max_output_tokens = options.max_output_tokens;
  req.structured_output = "agent_action";
  req.tag = options.tag;
  req.messages = {{llm::Role::system, render_agent_system(*input.test_case, templates)},
                  {llm::Role::user, agent_state_message(input, options.history_window)}};
  return req;
}

AgentAction parse_agent_reply(std::string_view reply) {
  std::optional<json> j;
  for (const auto& block : generation::extract_fenced_blocks(reply))
    if ((j = parse_object(block))) break;
  if (!j) j = parse_object(reply);
  if (!j) throw PlanningError("reply is not a JSON object");

  const auto act = j->find("action");
  if (act == j->end() || !act->is_object()) throw PlanningError("reply has no action object");
  const auto kind = act->find("kind");
  if (kind == act->end() || !kind->is_string()) throw PlanningError("action.kind must be a string");

  AgentAction out;
  try {
    out.action.kind = parse_action_kind(kind->get<std::string>());
  } catch (const Error&) {
    throw PlanningError("unknown action kind '" + kind->get<std::string>() + "'");
  }
  if (auto t = act->find("target"); t != act->end() && !t->is_null()) {
    if (!t->is_string()) throw PlanningError("action.target must be a string");
    out.action.target = t->get<std::string>();
  }
  if (auto v = act->find("value"); v != act->end() && !v->is_null()) {
    if (!v->is_string()) throw PlanningError("action.value must be a string");
    out.action.value = v->get<std::string>();
  }
  if (auto t = j->find("thought"); t != j->end() && t->is_string()) out.thought = t->get<std::string>();
  if (auto s = j->find("step"); s != j->end() && !s->is_null()) {
    if (!s->is_number_integer()) throw PlanningError("step must be an integer");
    out.step = s->get<int>();
  }
  if (auto problem = action_problem(out.action)) throw PlanningError(*problem);
  if (out.action.kind == ActionKind::emit_verdict && !parse_verdict_line(*out.action.value))
    throw PlanningError("verdict must read '<flow>: passed' or '<flow>: failed and step N'");
  return out;
}

std::string agent_reply_json(const AgentAction& a) {
  json j = {{"thought", a.thought}, {"action", reply_action_json(a.action)}, {"step", a.step ? json(*a.step) : json()}};
  return j.dump();
}

PlanResult plan_next(const PlannerInput& input, llm::ChatClient& client, const generation::PromptTemplates& templates,
                     const PlannerOptions& options) {
  auto req = build_plan_request(input, templates, options);
  PlanResult out;
  const auto admit = [&] {
    if (!options.token_budget) return;
    const auto remaining = *options.token_budget - out.usage.total() - llm::estimate_prompt_tokens(req);
    if (remaining <= 0) throw TokenBudgetExhausted("token budget exhausted before planning", out.usage);
    req.max_output_tokens = static_cast<int>(std::min<std::int64_t>(options.max_output_tokens, remaining));
  };
  admit();
  const auto first = client.complete(req);
  out.usage = first.usage;
  try {
    out.action = parse_agent_reply(first.content);
    return out;
  } catch (const PlanningError& e) {
    req.messages.push_back({llm::Role::assistant, first.content});
    req.messages.push_back({llm::Role::user, std::string("Your reply could not be used: ") + e.what() +
                                                 ". Reply with exactly one JSON object in the required format."});
    req.tag += "/reask";
  }
  admit();
  const auto second = client.complete(req);
  out.usage += second.usage;
  out.reasked = true;
  try {
    out.action = parse_agent_reply(second.content);
  } catch (const PlanningError& e) {
    throw PlanningError(std::string("planner reply unusable after re-ask: ") + e.what(), out.usage);
  }
  return out;
}

}  // namespace aqua::agent
