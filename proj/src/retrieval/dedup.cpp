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

#include "aqua/retrieval/dedup.hpp"

#include <algorithm>
#include <set>

#include "aqua/core/coverage.hpp"
#include "aqua/core/test_case_io.hpp"
#include "aqua/llm/embedding.hpp"

namespace aqua::retrieval {
namespace {

std::set<std::string> covered_without(std::span<const TestCase> cases, const std::vector<bool>& standing,
                                      std::size_t skip, const UserStory& story) {
  std::vector<TestCase> subset;
  for (std::size_t i = 0; i < cases.size(); ++i)
    if (standing[i] && i != skip) subset.push_back(cases[i]);
  return compute_coverage(story, subset).covered_ids();
}

}  // namespace

DuplicateReport prune_duplicates(std::span<const TestCase> cases, double threshold, const UserStory& story,
                                 llm::ChatClient& embedder) {
  DuplicateReport report;
  if (cases.empty()) return report;

  std::vector<std::string> texts;
  for (const auto& tc : cases) texts.push_back(behavior_text(tc));
  const auto vectors = embedder.embed(texts);

  const auto baseline = compute_coverage(story, cases).covered_ids();
  std::vector<bool> standing(cases.size(), true);
  std::vector<std::size_t> retained;

  for (std::size_t i = 0; i < cases.size(); ++i) {
    bool similar = false;
    for (std::size_t r : retained) {
      const double sim = llm::cosine_similarity(vectors[r], vectors[i]);
      if (sim >= threshold) {
        report.candidate_pairs.push_back({cases[r].id, cases[i].id, sim});
        similar = true;
      }
    }
    if (similar && covered_without(cases, standing, i, story) == baseline) {
      standing[i] = false;
      report.pruned.push_back(cases[i].id);
    } else {
      retained.push_back(i);
      report.retained.push_back(cases[i].id);
    }
  }
  return report;
}

std::vector<TestCase> retained_cases(std::span<const TestCase> cases, const DuplicateReport& report) {
  const std::set<std::string> keep(report.retained.begin(), report.retained.end());
  std::vector<TestCase> out;
  for (const auto& tc : cases)
    if (keep.contains(tc.id)) out.push_back(tc);
  return out;
}

}  // namespace aqua::retrieval
