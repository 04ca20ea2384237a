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

#include <span>
#include <string>
#include <vector>

#include "aqua/core/model.hpp"
#include "aqua/llm/client.hpp"

namespace aqua::retrieval {

inline constexpr double kDefaultDuplicateThreshold = 0.92;

struct DuplicatePair {
  std::string first;
  std::string second;
  double similarity = 0.0;

  friend bool operator==(const DuplicatePair&, const DuplicatePair&) = default;
};

struct DuplicateReport {
  std::vector<DuplicatePair> candidate_pairs;
  std::vector<std::string> pruned;
  std::vector<std::string> retained;

  friend bool operator==(const DuplicateReport&, const DuplicateReport&) = default;
};

// Greedy input-order scan. A case is pruned when it is at least `threshold`
// similar to an already retained case and the covered AC set of the cases
// still standing does not change without it.
DuplicateReport prune_duplicates(std::span<const TestCase> cases, double threshold, const UserStory& story,
                                 llm::ChatClient& embedder);

// Cases of `cases` listed as retained in `report`, in input order.
std::vector<TestCase> retained_cases(std::span<const TestCase> cases, const DuplicateReport& report);

}  // namespace aqua::retrieval
