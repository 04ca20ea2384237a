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

#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/core/error.hpp"
#include "aqua/core/model.hpp"
#include "aqua/generation/prompts.hpp"
#include "aqua/llm/client.hpp"
#include "aqua/retrieval/store.hpp"

namespace aqua::generation {

class JudgeError : public Error {
 public:
  using Error::Error;
};

struct CaseJudgement {
  std::string case_id;
  bool valid = true;
  std::vector<std::string> issues;
  std::vector<std::string> ac_refs_confirmed;

  friend bool operator==(const CaseJudgement&, const CaseJudgement&) = default;
};

struct JudgeReport {
  std::vector<CaseJudgement> cases;
  std::vector<std::string> uncovered_ac;
  std::vector<std::pair<std::string, std::string>> overlap_pairs;
  int format_violations = 0;
  std::vector<std::string> notes;
  llm::Usage usage;

  // No invalid case, no issue, no uncovered criterion, no overlap, no format
  // violation.
  bool clean() const;

  friend bool operator==(const JudgeReport&, const JudgeReport&) = default;
};

nlohmann::json to_json(const JudgeReport& report);
JudgeReport judge_report_from_json(const nlohmann::json& j);

// Issue text for a case whose step instructions restate `ac` verbatim
// (case- and whitespace-insensitive), or empty.
std::string restated_criterion_issue(const TestCase& tc, const UserStory& story);

// Builds the report from a parsed judge reply: confirmed refs are clipped to
// the story's criteria, cases the judge skipped are marked invalid, the AC
// restatement check is applied and uncovered_ac is the set difference.
JudgeReport finalize_judge_report(const nlohmann::json& reply, std::span<const TestCase> cases,
                                  const UserStory& story);

// One judge call (tag "judge/<story>/<iteration>"), plus one re-ask on an
// unparseable reply. Throws JudgeError after that.
JudgeReport judge_suite(std::span<const TestCase> cases, const UserStory& story,
                        const retrieval::ContextBundle& context, llm::ChatClient& client, const std::string& model,
                        const PromptTemplates& templates = PromptTemplates::defaults(), int iteration = 1,
                        double temperature = 0.0);

}  // namespace aqua::generation
