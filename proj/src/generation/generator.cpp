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

#include "aqua/generation/generator.hpp"

#include <set>

#include "aqua/core/test_case_io.hpp"
#include "aqua/core/validation.hpp"

namespace aqua::generation {
namespace {

std::string_view trim_left(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::string issue_text(const SchemaError& e) {
  return e.path().empty() ? e.reason() : e.path() + ": " + e.reason();
}

void parse_fragment(const nlohmann::json& j, const UserStory& story, std::set<std::string>& ids,
                    std::vector<TestCase>& cases, std::vector<RejectedFragment>& rejected) {
  const auto raw = j.dump();
  if (!j.is_object()) {
    rejected.push_back({raw, "expected a test case object"});
    return;
  }
  auto doc = j;
  doc.erase("provenance");
  TestCase tc;
  try {
    tc = test_case_from_json(doc);
  } catch (const SchemaError& e) {
    rejected.push_back({raw, issue_text(e)});
    return;
  }
  tc.provenance = Provenance::generated();
  const auto result = validate_test_case(tc, &story);
  for (const auto& issue : result.issues) {
    if (issue.severity == Severity::error) {
      rejected.push_back({raw, issue.path + ": " + issue.message});
      return;
    }
  }
  if (!ids.insert(tc.id).second) {
    rejected.push_back({raw, "id: duplicate case id '" + tc.id + "'"});
    return;
  }
  cases.push_back(std::move(tc));
}

std::string reask_message(const std::vector<RejectedFragment>& rejected) {
  std::string msg =
      "Your answer contained no usable test case. Answer again with every test case in its own fenced ```json "
      "block in the required format.";
  if (!rejected.empty()) {
    msg += " Problems found:";
    for (const auto& r : rejected) msg += "\n- " + r.issue;
  }
  return msg;
}

}  // namespace

std::vector<std::string> extract_fenced_blocks(std::string_view text) {
  std::vector<std::string> blocks;
  std::optional<std::string> current;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    if (trim_left(line).starts_with("```")) {
      if (current) {
        blocks.push_back(std::move(*current));
        current.reset();
      } else {
        current.emplace();
      }
    } else if (current) {
      current->append(line);
      current->push_back('\n');
    }
    pos = end + 1;
  }
  if (current) blocks.push_back(std::move(*current));
  return blocks;
}

void parse_generated_cases(std::string_view output, const UserStory& story, std::vector<TestCase>& cases,
                           std::vector<RejectedFragment>& rejected) {
  std::set<std::string> ids;
  for (const auto& tc : cases) ids.insert(tc.id);
  for (const auto& block : extract_fenced_blocks(output)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(block);
    } catch (const nlohmann::json::parse_error& e) {
      rejected.push_back({block, std::string("malformed JSON: ") + e.what()});
      continue;
    }
    if (j.is_array()) {
      for (const auto& item : j) parse_fragment(item, story, ids, cases, rejected);
    } else {
      parse_fragment(j, story, ids, cases, rejected);
    }
  }
}

GeneratedSuite generate_cases(const GenerationRequest& request, llm::ChatClient& client,
                              const PromptTemplates& templates, int iteration) {
  auto prompt = assemble_generation_prompt(request.story, request.context, templates, request.feedback);
  if (request.max_cases) prompt += "\nGenerate at most " + std::to_string(*request.max_cases) + " test cases.\n";

  llm::ChatRequest chat;
  chat.model = request.model;
  chat.temperature = request.temperature;
  chat.messages = {{llm::Role::user, prompt}};
  chat.tag = "generate/" + request.story.id + "/" + std::to_string(iteration);

  GeneratedSuite suite;
  auto response = client.complete(chat);
  suite.usage += response.usage;
  parse_generated_cases(response.content, request.story, suite.cases, suite.rejected_fragments);
  if (!suite.cases.empty()) return suite;

  if (suite.rejected_fragments.empty()) suite.rejected_fragments.push_back({response.content, "no fenced block found"});
  chat.messages.push_back({llm::Role::assistant, response.content});
  chat.messages.push_back({llm::Role::user, reask_message(suite.rejected_fragments)});
  chat.tag += "/reask";
  response = client.complete(chat);
  suite.usage += response.usage;
  const auto before = suite.rejected_fragments.size();
  parse_generated_cases(response.content, request.story, suite.cases, suite.rejected_fragments);
  if (suite.cases.empty()) {
    if (suite.rejected_fragments.size() == before)
      suite.rejected_fragments.push_back({response.content, "no fenced block found"});
    throw GenerationError("no parseable test case for " + request.story.id + " after one re-ask: " +
                          suite.rejected_fragments.back().issue);
  }
  return suite;
}

}  // namespace aqua::generation
