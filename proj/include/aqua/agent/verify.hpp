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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aqua/agent/types.hpp"
#include "aqua/core/model.hpp"

namespace aqua::agent {

struct HarnessResult {
  Verdict verdict;
  std::vector<CheckpointResult> checkpoints;
};

// Decides the run from the observations alone; the agent's own verdict is
// never read. `history` is every observation in order, the initial one
// first. Operands may reference test data.
HarnessResult verify_checkpoints(const ExecutionRecord& record, const CheckpointSet& checkpoints,
                                 std::span<const browser::Observation> history,
                                 const std::map<std::string, std::string>& test_data = {});

// Evaluates one assertion against the history.
CheckpointResult evaluate_checkpoint(const Checkpoint& checkpoint, std::span<const browser::Observation> history,
                                     const std::map<std::string, std::string>& test_data = {});

struct Resolution {
  Verdict final_verdict;
  bool disagreement = false;
};

// The harness always decides; a self-report that differs is flagged.
Resolution resolve_verdicts(const std::optional<Verdict>& agent, const Verdict& harness);

// Element count a count_compare target denotes: the integer text of an exact
// selector, 0 when absent, or the number of selectors starting with the
// prefix for targets ending in '*'.
std::optional<long long> extract_count(const browser::Observation& obs, std::string_view target);

}  // namespace aqua::agent
