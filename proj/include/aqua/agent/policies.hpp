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

#include <memory>
#include <optional>

#include "aqua/core/model.hpp"
#include "aqua/llm/client.hpp"

namespace aqua::agent {

// Deterministic stand-ins for a planner model. They read the state document
// from the last user message and answer with one action, reporting
// synthetic usage: the prompt estimate plus the reply estimate capped at
// the request's output limit.
enum class PolicyKind {
  honest,      // follows the hints, recovers from popups and timeouts, judges itself strictly
  naive,       // follows the hints and gives up on the first non-ok outcome
  corrective,  // undoes a known mutation and always reports passed
};

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view text);

// `diff` is used by the corrective policy only.
std::unique_ptr<llm::ChatClient> make_policy_client(PolicyKind kind, std::optional<MutationDiff> diff = {});

}  // namespace aqua::agent
