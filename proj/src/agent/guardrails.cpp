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

#include "aqua/agent/guardrails.hpp"

#include <map>
#include <tuple>

#include "aqua/core/error.hpp"

namespace aqua::agent {

void GuardrailConfig::validate() const {
  if (max_total_tokens <= 0) throw ConfigError("guardrails.max_total_tokens must be positive");
  if (max_wall_seconds <= 0) throw ConfigError("guardrails.max_wall_seconds must be positive");
  if (max_steps <= 0) throw ConfigError("guardrails.max_steps must be positive");
  if (loop_repeat < 2) throw ConfigError("guardrails.loop_repeat must be at least 2");
  if (loop_window < loop_repeat) throw ConfigError("guardrails.loop_window must be at least loop_repeat");
}

std::optional<GuardrailTrip> check_guardrails(std::span<const TraceEvent> trace, const GuardrailConfig& config) {
  if (trace.empty()) return std::nullopt;
  const int at = trace.back().step_number;
  std::int64_t tokens = 0;
  std::int64_t elapsed = 0;
  for (const auto& e : trace) {
    tokens += e.usage_delta.total();
    elapsed += e.elapsed_ms;
  }
  if (tokens >= config.max_total_tokens) return GuardrailTrip{GuardrailReason::max_tokens, at};
  if (elapsed >= config.max_wall_seconds * 1000) return GuardrailTrip{GuardrailReason::max_time, at};
  if (static_cast<std::int64_t>(trace.size()) >= config.max_steps) return GuardrailTrip{GuardrailReason::max_steps, at};

  const auto window = std::min<std::size_t>(trace.size(), static_cast<std::size_t>(config.loop_window));
  std::map<std::tuple<std::string, ActionKind, std::string>, int> seen;
  for (auto i = trace.size() - window; i < trace.size(); ++i) {
    const auto& e = trace[i];
    if (++seen[{e.observation_digest, e.action.kind, e.action.target}] >= config.loop_repeat)
      return GuardrailTrip{GuardrailReason::reasoning_loop, at};
  }
  return std::nullopt;
}

}  // namespace aqua::agent
