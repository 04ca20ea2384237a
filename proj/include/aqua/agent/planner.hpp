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

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "aqua/agent/types.hpp"
#include "aqua/generation/prompts.hpp"
#include "aqua/llm/client.hpp"

namespace aqua::agent {

class PlanningError : public Error {
 public:
  explicit PlanningError(const std::string& message, llm::Usage spent = {}) : Error(message), spent_(spent) {}
  // Tokens consumed by the failed turn.
  const llm::Usage& spent() const noexcept { return spent_; }

 private:
  llm::Usage spent_;
};

// The next request would not fit in the remaining token budget.
class TokenBudgetExhausted : public PlanningError {
 public:
  using PlanningError::PlanningError;
};

struct PlannerInput {
  const TestCase* test_case = nullptr;
  std::span<const TraceEvent> trace;
  const browser::Observation* observation = nullptr;
  std::optional<std::string> divergence;
  int remaining_steps = 0;
};

struct PlannerOptions {
  std::string model;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::size_t history_window = 12;
  std::string tag;
  // Tokens left for this turn, re-ask included. Each request's output limit
  // is clamped to what remains after its estimated prompt.
  std::optional<std::int64_t> token_budget;
};

struct PlanResult {
  AgentAction action;
  llm::Usage usage;
  bool reasked = false;
};

std::string render_agent_system(const TestCase& tc, const generation::PromptTemplates& templates);

// The per-turn state the planner sees, as one JSON document.
nlohmann::json agent_state(const PlannerInput& input, std::size_t history_window);
std::string agent_state_message(const PlannerInput& input, std::size_t history_window);
// Extracts the state document from a user message; nullopt if absent.
std::optional<nlohmann::json> parse_agent_state(std::string_view message);

llm::ChatRequest build_plan_request(const PlannerInput& input, const generation::PromptTemplates& templates,
                                    const PlannerOptions& options);

// Reads {"thought", "action": {"kind", "target", "value"}, "step"} from a
// reply, fenced or bare. Throws PlanningError naming the problem.
AgentAction parse_agent_reply(std::string_view reply);
std::string agent_reply_json(const AgentAction& action);

// One planning turn with a single re-ask on malformed output. Throws
// PlanningError after the re-ask, TokenBudgetExhausted when a request no
// longer fits, and lets ProviderError through.
PlanResult plan_next(const PlannerInput& input, llm::ChatClient& client, const generation::PromptTemplates& templates,
                     const PlannerOptions& options);

}  // namespace aqua::agent
