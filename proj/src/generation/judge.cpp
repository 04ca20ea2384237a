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

#include "aqua/generation/judge.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "aqua/core/test_case_io.hpp"
#include "aqua/generation/generator.hpp"

namespace aqua::generation {
namespace {

using nlohmann::json;

std::string normalize_text(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out.push_back(' ');
    space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && (out.back() == '.' || out.back() == '!')) out.pop_back();
  return out;
}

std::vector<std::string> string_list(const json& j, const char* key) {
  std::vector<std::string> out;
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw JudgeError(std::string("judge reply: '") + key + "' must be a list");
  for (const auto& v : *it) {
    if (!v.is_string()) throw JudgeError(std::string("judge reply: '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json parse_reply(const std::string& content) {
  const auto blocks = extract_fenced_blocks(content);
  const std::string& body = blocks.empty() ? content : blocks.front();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw JudgeError(std::string("judge reply is not JSON: ") + e.what());
  }
}

std::string render_cases(std::span<const TestCase> cases) {
  std::string out;
  for (const auto& tc : cases) out += "```json\n" + serialize_test_case(tc) + "```\n";
  return out;
}

}  // namespace

bool JudgeReport::clean() const {
  return uncovered_ac.empty() && overlap_pairs.empty() && format_violations == 0 &&
         std::all_of(cases.begin(), cases.end(), [](const CaseJudgement& c) { return c.valid && c.issues.empty(); });
}

json to_json(const JudgeReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"id", c.case_id}, {"valid", c.valid}, {"issues", c.issues},
                     {"ac_refs_confirmed", c.ac_refs_confirmed}});
  }
  json pairs = json::array();
  for (const auto& [a, b] : report.overlap_pairs) pairs.push_back({a, b});
  return {{"cases", cases},
          {"uncovered_ac", report.uncovered_ac},
          {"overlap_pairs", pairs},
          {"format_violations", report.format_violations},
          {"notes", report.notes},
          {"usage", {{"prompt_tokens", report.usage.prompt_tokens}, {"completion_tokens", report.usage.completion_tokens}}}};
}

JudgeReport judge_report_from_json(const json& j) {
  try {
    JudgeReport r;
    for (const auto& c : j.at("cases")) {
      r.cases.push_back({c.at("id").get<std::string>(), c.at("valid").get<bool>(),
                         c.at("issues").get<std::vector<std::string>>(),
                         c.at("ac_refs_confirmed").get<std::vector<std::string>>()});
    }
    r.uncovered_ac = j.at("uncovered_ac").get<std::vector<std::string>>();
    for (const auto& p : j.at("overlap_pairs")) r.overlap_pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    r.format_violations = j.at("format_violations").get<int>();
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (auto it = j.find("usage"); it != j.end()) {
      r.usage = {it->at("prompt_tokens").get<std::int64_t>(), it->at("completion_tokens").get<std::int64_t>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw SchemaError("judge_report", e.what());
  }
}

std::string restated_criterion_issue(const TestCase& tc, const UserStory& story) {
  for (const auto& ac : story.acceptance_criteria) {
    const auto needle = normalize_text(ac.text);
    if (needle.empty()) continue;
    for (const auto& step : tc.steps) {
      if (normalize_text(step.instruction).find(needle) != std::string::npos) {
        return "step " + std::to_string(step.index) + " restates acceptance criterion " + ac.id +
               " verbatim; test case and acceptance criterion are confused";
      }
    }
  }
  return {};
}

JudgeReport finalize_judge_report(const json& reply, std::span<const TestCase> cases, const UserStory& story) {
  if (!reply.is_object() || !reply.contains("cases") || !reply["cases"].is_array())
    throw JudgeError("judge reply must be an object with a 'cases' list");

  std::set<std::string> story_acs;
  for (const auto& ac : story.acceptance_criteria) story_acs.insert(ac.id);
  std::set<std::string> suite_ids;
  for (const auto& tc : cases) suite_ids.insert(tc.id);

  JudgeReport report;
  std::map<std::string, CaseJudgement> judged;
  for (const auto& item : reply["cases"]) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string())
      throw JudgeError("judge reply: every case entry needs a string 'id'");
    CaseJudgement c;
    c.case_id = item["id"].get<std::string>();
    if (auto it = item.find("valid"); it != item.end()) {
      if (!it->is_boolean()) throw JudgeError("judge reply: 'valid' must be a boolean");
      c.valid = it->get<bool>();
    }
    c.issues = string_list(item, "issues");
    for (auto& ref : string_list(item, "ac_refs_confirmed")) {
      if (story_acs.contains(ref))
        c.ac_refs_confirmed.push_back(std::move(ref));
      else
        report.notes.push_back("judge confirmed unknown criterion '" + ref + "' for " + c.case_id);
    }
    if (!suite_ids.contains(c.case_id)) {
      report.notes.push_back("judge assessed unknown case '" + c.case_id + "'");
      continue;
    }
    judged[c.case_id] = std::move(c);
  }

  std::set<std::string> confirmed;
  for (const auto& tc : cases) {
    CaseJudgement c;
    if (auto it = judged.find(tc.id); it != judged.end()) {
      c = it->second;
    } else {
      c.case_id = tc.id;
      c.valid = false;
      c.issues.push_back("not assessed by the judge");
    }
    if (auto issue = restated_criterion_issue(tc, story); !issue.empty()) {
      c.valid = false;
      c.issues.push_back(std::move(issue));
    }
    confirmed.insert(c.ac_refs_confirmed.begin(), c.ac_refs_confirmed.end());
    report.cases.push_back(std::move(c));
  }

  for (const auto& ac : story.acceptance_criteria)
    if (!confirmed.contains(ac.id)) report.uncovered_ac.push_back(ac.id);

  if (auto it = reply.find("overlap_pairs"); it != reply.end() && !it->is_null()) {
    if (!it->is_array()) throw JudgeError("judge reply: 'overlap_pairs' must be a list");
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw JudgeError("judge reply: overlap pairs must be two case ids");
      const auto a = p[0].get<std::string>(), b = p[1].get<std::string>();
      if (suite_ids.contains(a) && suite_ids.contains(b) && a != b) report.overlap_pairs.emplace_back(a, b);
    }
  }
  if (auto it = reply.find("format_violations"); it != reply.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<int>() < 0)
      throw JudgeError("judge reply: 'format_violations' must be a non-negative integer");
    report.format_violations = it->get<int>();
  }
  for (auto& n : string_list(reply, "notes")) report.notes.push_back(std::move(n));
  return report;
}

JudgeReport judge_suite(std::span<const TestCase> cases, const UserStory& story,
                        const retrieval::ContextBundle& context, llm::ChatClient& client, const std::string& model,
                        const PromptTemplates& templates, int iteration, double temperature) {
  llm::ChatRequest chat;
  chat.model = model;
  chat.temperature = temperature;
  chat.structured_output = "judge_report";
  chat.tag = "judge/" + story.id + "/" + std::to_string(iteration);
  chat.messages = {{llm::Role::user, render_template(templates.judge_rubric,
                                                     {{"story_id", story.id},
                                                      {"title", story.title},
                                                      {"description", story.description},
                                                      {"acceptance_criteria", format_acceptance_criteria(story)},
                                                      {"context", format_context(context)},
                                                      {"cases", render_cases(cases)}})}};

  llm::Usage usage;
  auto response = client.complete(chat);
  usage += response.usage;
  try {
    auto report = finalize_judge_report(parse_reply(response.content), cases, story);
    report.usage = usage;
    return report;
  } catch (const JudgeError& first) {
    chat.messages.push_back({llm::Role::assistant, response.content});
    chat.messages.push_back({llm::Role::user, std::string("Your reply could not be used (") + first.what() +
                                                  "). Reply again with one fenced ```json block in the required shape."});
    chat.tag += "/reask";
    response = client.complete(chat);
    usage += response.usage;
    try {
      auto report = finalize_judge_report(parse_reply(response.content), cases, story);
      report.usage = usage;
      return report;
    } catch (const JudgeError& second) {
      throw JudgeError("unusable judge reply for " + story.id + " after one re-ask: " + second.what());
    }
  }
}

}  // namespace aqua::generation
