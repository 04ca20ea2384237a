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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "aqua/core/model.hpp"
#include "aqua/retrieval/store.hpp"

namespace aqua::generation {

// Editable prompt texts. Placeholders are written ${name}.
struct PromptTemplates {
  std::string generation;
  std::string judge_rubric;
  std::string agent_system;

  // The texts shipped in resources/prompts, compiled in.
  static PromptTemplates defaults();
};

// Files generation.txt, judge_rubric.txt and agent_system.txt in `dir`
// override the defaults; missing files keep them.
PromptTemplates load_prompt_templates(const std::filesystem::path& dir);

// Substitutes every ${name}. Throws Error naming an unknown placeholder.
std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars);

std::string format_context(const retrieval::ContextBundle& context);
std::string format_acceptance_criteria(const UserStory& story);

std::string assemble_generation_prompt(const UserStory& story, const retrieval::ContextBundle& context,
                                       const PromptTemplates& templates = PromptTemplates::defaults(),
                                       std::string_view feedback = {});

}  // namespace aqua::generation
