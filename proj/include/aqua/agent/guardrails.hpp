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
#include <span>

#include "aqua/agent/types.hpp"

namespace aqua::agent {

struct GuardrailConfig {
  std::int64_t max_total_tokens = 400000;
  std::int64_t max_wall_seconds = 180;
  int max_steps = 40;
  // A (state digest, action kind + target) pair seen loop_repeat times among
  // the last loop_window events is a reasoning loop.
  int loop_window = 12;
  int loop_repeat = 3;

  // Throws ConfigError unless all are positive, loop_repeat >= 2 and
  // loop_window >= loop_repeat.
  void validate() const;

  friend bool operator==(const GuardrailConfig&, const GuardrailConfig&) = default;
};

// Checks in priority order: tokens, time, steps, loop.
std::optional<GuardrailTrip> check_guardrails(std::span<const TraceEvent> trace, const GuardrailConfig& config);

}  // namespace aqua::agent
