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

#include "aqua/generation/prompts.hpp"

#include <fstream>
#include <sstream>

#include "aqua/core/error.hpp"
#include "aqua/embedded_prompts.hpp"

namespace aqua::generation {
namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  return {std::string(prompts::k_generation), std::string(prompts::k_judge_rubric),
          std::string(prompts::k_agent_system)};
}

PromptTemplates load_prompt_templates(const std::filesystem::path& dir) {
  auto t = PromptTemplates::defaults();
  auto load = [&](const char* name, std::string& slot) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read prompt template " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    slot = ss.str();
  };
  load("generation.txt", t.generation);
  load("judge_rubric.txt", t.judge_rubric);
  load("agent_system.txt", t.agent_system);
  return t;
}

std::string render_template(std::string_view tpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const auto open = tpl.find("${", pos);
    if (open == std::string_view::npos) {
      out.append(tpl.substr(pos));
      break;
    }
    const auto close = tpl.find('}', open + 2);
    if (close == std::string_view::npos) throw Error("unterminated placeholder in prompt template");
    out.append(tpl.substr(pos, open - pos));
    const std::string name(tpl.substr(open + 2, close - open - 2));
    const auto it = vars.find(name);
    if (it == vars.end()) throw Error("unknown prompt placeholder '" + name + "'");
    out += it->second;
    pos = close + 1;
  }
  return out;
}

std::string format_context(const retrieval::ContextBundle& context) {
  std::string out;
  for (const auto& chunk : context.chunks) {
    if (!out.empty()) out += "\n---\n";
    out += "[" + chunk.id + "]\n" + chunk.text;
  }
  return out;
}

std::string format_acceptance_criteria(const UserStory& story) {
  std::string out;
  for (const auto& ac : story.acceptance_criteria) out += ac.id + ": " + ac.text + "\n";
  return out;
}

std::string assemble_generation_prompt(const UserStory& story, const retrieval::ContextBundle& context,
                                       const PromptTemplates& templates, std::string_view feedback) {
  std::string fb;
  if (!feedback.empty()) {
    fb = "\nA reviewer found problems in your previous answer. Fix all of them and answer again in full.\n"
         "<review>\n" + std::string(feedback) + "\n</review>\n";
  }
  return render_template(templates.generation, {
                                                   {"title", story.title},
                                                   {"description", story.description},
                                                   {"preconditions", join(story.preconditions, "; ")},
                                                   {"acceptance_criteria", format_acceptance_criteria(story)},
                                                   {"context", format_context(context)},
                                                   {"feedback", fb},
                                               });
}

}  // namespace aqua::generation
