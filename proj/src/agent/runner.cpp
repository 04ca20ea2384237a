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

#include "aqua/agent/runner.hpp"

#include <chrono>

#include "aqua/agent/planner.hpp"
#include "aqua/agent/verify.hpp"
#include "aqua/core/checkpoints.hpp"
#include "aqua/core/validation.hpp"

namespace aqua::agent {
namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::optional<std::string> divergence_of(const TraceEvent& e) {
  const auto what = std::string(to_string(e.action.kind)) + (e.action.target.empty() ? "" : " " + e.action.target);
  if (e.outcome != browser::ActionOutcome::ok)
    return "event " + std::to_string(e.step_number) + " (" + what + ") ended with " +
           std::string(browser::to_string(e.outcome)) + "; plan a corrective action from the current page";
  if (e.action.kind == ActionKind::assert_visible && e.action.value) {
    const auto* el = e.observation.find(e.action.target);
    const std::string found = el ? el->text : "";
    if (found != *e.action.value)
      return "event " + std::to_string(e.step_number) + " (" + what + ") expected '" + *e.action.value + "' but found '" +
             found + "'";
  }
  return std::nullopt;
}

}  // namespace

std::string selector_log_line(const TraceEvent& event) {
  const auto name = event.case_step ? "step " + std::to_string(*event.case_step) : std::string("extra");
  return name + ": " + std::string(to_string(event.action.kind)) + ": " + event.action.target;
}

std::vector<Action> executed_actions(const ExecutionRecord& record) {
  std::vector<Action> out;
  for (const auto& e : record.events)
    if (e.action.kind != ActionKind::emit_verdict) out.push_back(e.action);
  return out;
}

ExecutionRecord execute_flow(const TestCase& tc, browser::BrowserSession& session, llm::ChatClient& client,
                             const RunnerOptions& options) {
  const auto& cfg = options.guardrails;
  cfg.validate();
  const auto checkpoints = compile_checkpoints(tc);
  const auto started = Clock::now();
  const std::int64_t time_budget_ms = cfg.max_wall_seconds * 1000;

  ExecutionRecord rec;
  rec.case_id = tc.id;
  rec.flow_name = tc.title;
  rec.roles = options.roles;

  std::vector<browser::Observation> history;
  std::optional<std::string> divergence;
  std::int64_t elapsed_ms = 0;
  llm::Usage spent;

  try {
    history.push_back(session.snapshot());
  } catch (const browser::BrowserError& e) {
    rec.error = std::string("browser: ") + e.what();
  }

  while (!rec.error) {
    if (auto trip = check_guardrails(rec.events, cfg)) {
      rec.guardrail_trip = trip;
      break;
    }
    const int number = static_cast<int>(rec.events.size()) + 1;
    PlannerInput input{&tc, rec.events, &history.back(), divergence, cfg.max_steps - static_cast<int>(rec.events.size())};
    PlannerOptions popts;
    popts.model = rec.events.empty() || divergence ? options.roles.planner : options.roles.executor;
    popts.temperature = options.temperature;
    popts.max_output_tokens = options.max_output_tokens;
    popts.history_window = options.history_window;
    popts.tag = options.tag + "/" + std::to_string(number);
    popts.token_budget = cfg.max_total_tokens - spent.total();

    const auto turn_started = Clock::now();
    PlanResult plan;
    try {
      plan = plan_next(input, client, options.templates, popts);
    } catch (const TokenBudgetExhausted& e) {
      spent += e.spent();
      rec.guardrail_trip = GuardrailTrip{GuardrailReason::max_tokens, number - 1};
      break;
    } catch (const PlanningError& e) {
      spent += e.spent();
      rec.error = std::string("planning: ") + e.what();
      break;
    } catch (const llm::ProviderError& e) {
      rec.error = std::string("provider: ") + e.what();
      break;
    }
    spent += plan.usage;

    TraceEvent ev;
    ev.step_number = number;
    ev.thought = plan.action.thought;
    ev.action = plan.action.action;
    ev.action.target = resolve_placeholders(ev.action.target, tc.test_data);
    if (ev.action.value) ev.action.value = resolve_placeholders(*ev.action.value, tc.test_data);
    ev.case_step = plan.action.step;
    ev.model = popts.model;
    ev.usage_delta = plan.usage;

    if (ev.action.kind == ActionKind::emit_verdict) {
      ev.observation = history.back();
      ev.observation_digest = browser::observation_digest(ev.observation);
      ev.elapsed_ms = options.hermetic ? 0 : std::min(ms_since(turn_started), time_budget_ms - elapsed_ms);
      rec.agent_verdict = parse_verdict_line(*ev.action.value);
      rec.events.push_back(std::move(ev));
      break;
    }

    browser::Observation obs;
    try {
      obs = session.apply(ev.action);
    } catch (const browser::BrowserError& e) {
      rec.error = std::string("browser: ") + e.what();
      break;
    }
    std::int64_t duration = session.last_action_duration().count();
    if (!options.hermetic) duration = ms_since(turn_started);
    if (duration > time_budget_ms - elapsed_ms) {
      duration = time_budget_ms - elapsed_ms;
      obs.last_outcome = browser::ActionOutcome::timeout;
    }
    elapsed_ms += duration;
    ev.elapsed_ms = duration;
    ev.outcome = obs.last_outcome;
    ev.observation_digest = browser::observation_digest(obs);
    ev.observation = obs;
    divergence = divergence_of(ev);
    history.push_back(std::move(obs));
    rec.events.push_back(std::move(ev));
  }

  auto harness = verify_checkpoints(rec, checkpoints, history, tc.test_data);
  rec.checkpoints = std::move(harness.checkpoints);
  rec.harness_verdict = harness.verdict;
  const auto resolution = resolve_verdicts(rec.agent_verdict, rec.harness_verdict);
  rec.final_verdict = resolution.final_verdict;
  rec.disagreement = resolution.disagreement;
  for (const auto& e : rec.events)
    if (!e.action.target.empty()) rec.selector_log.push_back(selector_log_line(e));
  rec.totals = spent;
  rec.wall_ms = options.hermetic ? 0 : ms_since(started);
  return rec;
}

}  // namespace aqua::agent
