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

#include <string>

#include "aqua/agent/guardrails.hpp"
#include "aqua/agent/types.hpp"
#include "aqua/browser/session.hpp"
#include "aqua/generation/prompts.hpp"
#include "aqua/llm/client.hpp"

namespace aqua::agent {

struct RunnerOptions {
  GuardrailConfig guardrails;
  ModelRoles roles{"planner", "executor"};
  generation::PromptTemplates templates = generation::PromptTemplates::defaults();
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::size_t history_window = 12;
  // Simulated time only and zeroed wall clock, for reproducible records.
  bool hermetic = true;
  // Prefix for request tags, e.g. "run/LOGIN-1/0".
  std::string tag;
};

// Runs the ReAct loop until the agent emits a verdict, a guardrail trips, or
// the planner or browser fails. Browser and provider failures end in an
// inconclusive record rather than an exception.
ExecutionRecord execute_flow(const TestCase& tc, browser::BrowserSession& session, llm::ChatClient& client,
                             const RunnerOptions& options = {});

// "step N: kind: selector", or "extra: ..." for actions outside the steps.
std::string selector_log_line(const TraceEvent& event);

// Actions applied to the browser, in order, excluding verdicts.
std::vector<Action> executed_actions(const ExecutionRecord& record);

}  // namespace aqua::agent
