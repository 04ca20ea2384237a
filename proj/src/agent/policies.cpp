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

#include "aqua/agent/policies.hpp"

#include <nlohmann/json.hpp>

#include "aqua/agent/planner.hpp"
#include "aqua/agent/verify.hpp"
#include "aqua/core/test_case_io.hpp"
#include "aqua/llm/embedding.hpp"

namespace aqua::agent {
namespace {

using nlohmann::json;

bool contains(const json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

AgentAction verdict(const std::string& title, std::optional<int> failed_step, const std::string& cause) {
  AgentAction a;
  a.action.kind = ActionKind::emit_verdict;
  if (!failed_step) {
    a.thought = "every step ran and the expected results hold";
    a.action.value = title + ": passed";
  } else {
    a.thought = "the flow cannot be completed as written";
    a.action.value = title + ": failed and step " + std::to_string(*failed_step) + "\n" + cause;
  }
  return a;
}

Action hint_of(const json& step) { return action_from_json(step.at("hint"), "hint"); }

class PolicyClient final : public llm::ChatClient {
 public:
  PolicyClient(PolicyKind kind, std::optional<MutationDiff> diff) : kind_(kind), diff_(std::move(diff)) {}

  llm::ChatResponse complete(const llm::ChatRequest& request) override {
    std::optional<json> state;
    for (auto it = request.messages.rbegin(); it != request.messages.rend() && !state; ++it)
      if (it->role == llm::Role::user) state = parse_agent_state(it->content);
    if (!state) throw llm::ProviderError(llm::ProviderError::Kind::malformed_payload, "policy client got no agent state");

    auto reply = agent_reply_json(decide(*state));
    const auto completion = llm::estimate_tokens(reply);
    llm::ChatResponse out;
    out.usage = {llm::estimate_prompt_tokens(request), std::min<std::int64_t>(completion, request.max_output_tokens)};
    if (completion > request.max_output_tokens) {
      reply.resize(static_cast<std::size_t>(std::max(0, request.max_output_tokens)) * 4);
      out.finish_reason = llm::FinishReason::length;
    }
    out.content = std::move(reply);
    return out;
  }

  std::vector<llm::Embedding> embed(std::span<const std::string> texts) override {
    std::vector<llm::Embedding> out;
    for (const auto& t : texts) out.push_back(llm::stub_embedding(t));
    return out;
  }

 private:
  AgentAction decide(const json& state) const {
    const auto& tc = state.at("case");
    const auto title = tc.at("title").get<std::string>();
    const auto& steps = tc.at("steps");
    const auto& history = state.at("history");
    const auto obs = browser::observation_from_json(state.at("observation"));

    if (obs.popup_present && kind_ != PolicyKind::naive) {
      AgentAction a;
      a.thought = "a popup covers the page";
      a.action = {ActionKind::dismiss_popup, "popup-close", std::nullopt};
      return a;
    }
    if (kind_ == PolicyKind::naive && !history.empty() && history.back().at("outcome") != "ok") {
      const auto& last = history.back();
      const auto step = contains(last, "step") ? last.at("step").get<int>() : 0;
      return verdict(title, step, "action ended with " + last.at("outcome").get<std::string>());
    }

    std::optional<int> next_after;
    std::optional<int> retry;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
      if (!contains(*it, "step")) continue;
      const int n = it->at("step").get<int>();
      const auto outcome = it->at("outcome").get<std::string>();
      if (outcome == "ok") {
        next_after = n;
      } else if (kind_ == PolicyKind::corrective) {
        next_after = n;
      } else if (outcome == "element_not_found") {
        return verdict(title, n, it->at("action").value("target", "") + " not found on " + obs.url);
      } else {
        int failures = 0;
        for (const auto& h : history)
          if (contains(h, "step") && h.at("step") == n && h.at("outcome") != "ok") ++failures;
        if (failures >= 3) return verdict(title, n, "step kept failing with " + outcome);
        retry = n;
      }
      break;
    }

    for (const auto& step : steps) {
      const int index = step.at("index").get<int>();
      if (!contains(step, "hint")) continue;
      if (retry ? index != *retry : next_after && index <= *next_after) continue;
      AgentAction a;
      a.thought = "step " + std::to_string(index) + ": " + step.at("instruction").get<std::string>();
      a.action = repaired(hint_of(step));
      a.step = index;
      return a;
    }
    return conclude(title, tc, history, obs, next_after.value_or(0));
  }

  Action repaired(Action a) const {
    if (kind_ != PolicyKind::corrective || !diff_) return a;
    if (a.target == diff_->mutated) a.target = diff_->original;
    if (a.value && *a.value == diff_->mutated) a.value = diff_->original;
    return a;
  }

  AgentAction conclude(const std::string& title, const json& tc, const json& history, const browser::Observation& obs,
                       int last_step) const {
    if (kind_ == PolicyKind::corrective) return verdict(title, std::nullopt, "");
    std::vector<browser::Observation> seen(1);
    for (const auto& h : history) {
      browser::Observation o;
      o.url = h.at("url").get<std::string>();
      seen.push_back(std::move(o));
    }
    seen.push_back(obs);
    const auto& expected = tc.at("expected_results");
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (!contains(expected[i], "assertion")) continue;
      const Checkpoint cp{i, assertion_from_json(expected[i].at("assertion"), "assertion")};
      if (evaluate_checkpoint(cp, seen).status == CheckpointStatus::held) continue;
      const auto* banner = obs.find("error");
      return verdict(title, last_step,
                     banner ? banner->text : "expected result not met: " + expected[i].at("text").get<std::string>());
    }
    return verdict(title, std::nullopt, "");
  }

  PolicyKind kind_;
  std::optional<MutationDiff> diff_;
};

}  // namespace

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::honest: return "honest";
    case PolicyKind::naive: return "naive";
    case PolicyKind::corrective: return "corrective";
  }
  return "honest";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view text) {
  for (auto k : {PolicyKind::honest, PolicyKind::naive, PolicyKind::corrective})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

std::unique_ptr<llm::ChatClient> make_policy_client(PolicyKind kind, std::optional<MutationDiff> diff) {
  return std::make_unique<PolicyClient>(kind, std::move(diff));
}

}  // namespace aqua::agent
