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
#include <string>
#include <string_view>
#include <vector>

#include "aqua/core/error.hpp"
#include "aqua/core/model.hpp"
#include "aqua/generation/judge.hpp"
#include "aqua/generation/prompts.hpp"
#include "aqua/llm/client.hpp"
#include "aqua/retrieval/store.hpp"

namespace aqua::generation {

class GenerationError : public Error {
 public:
  using Error::Error;
};

struct GenerationRequest {
  UserStory story;
  retrieval::ContextBundle context;
  std::string model;
  double temperature = 0.2;
  std::optional<int> max_cases;
  // Serialized judge report of the previous round, empty on the first.
  std::string feedback;
};

struct RejectedFragment {
  std::string raw;
  std::string issue;
};

struct GeneratedSuite {
  std::vector<TestCase> cases;
  llm::Usage usage;
  int iterations = 1;
  std::vector<RejectedFragment> rejected_fragments;
  // The judge report of the last round, when the suite went through judging.
  std::optional<JudgeReport> report;
};

// Contents of ``` fenced blocks, in order; the info string after the opening
// fence is dropped. An unterminated block runs to the end of the text.
std::vector<std::string> extract_fenced_blocks(std::string_view text);

// Turns every fenced block into valid cases or rejected fragments. A block
// may hold one case object or an array of them. Cases always get generated
// provenance.
void parse_generated_cases(std::string_view output, const UserStory& story, std::vector<TestCase>& cases,
                           std::vector<RejectedFragment>& rejected);

// One generation call (tag "generate/<story>/<iteration>"), plus one re-ask
// (tag suffix "/reask") when nothing parses. Throws GenerationError when the
// re-ask yields no case either.
GeneratedSuite generate_cases(const GenerationRequest& request, llm::ChatClient& client,
                              const PromptTemplates& templates = PromptTemplates::defaults(), int iteration = 1);

}  // namespace aqua::generation
