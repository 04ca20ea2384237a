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

#include "aqua/core/validation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <regex>
#include <set>

namespace aqua {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parses_as_number(const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  return !text.empty() && ec == std::errc{} && ptr == text.data() + text.size();
}

void error(ValidationResult& r, std::string path, std::string message) {
  r.issues.push_back({std::move(path), std::move(message), Severity::error});
  r.valid = false;
}

}  // namespace

std::optional<std::string> action_problem(const Action& action) {
  const bool has_value = action.value && !action.value->empty();
  switch (action.kind) {
    case ActionKind::navigate:
      if (!has_value) return "navigate requires a URL value";
      break;
    case ActionKind::type_text:
      if (action.target.empty() || !action.value) return "type_text requires target and value";
      break;
    case ActionKind::select_option:
      if (action.target.empty() || !has_value) return "select_option requires target and value";
      break;
    case ActionKind::click:
    case ActionKind::read:
    case ActionKind::assert_visible:
      if (action.target.empty()) return std::string(to_string(action.kind)) + " requires a target";
      break;
    case ActionKind::emit_verdict:
      if (!has_value) return "emit_verdict requires a verdict line";
      break;
    case ActionKind::dismiss_popup:
    case ActionKind::go_back:
      break;
  }
  return std::nullopt;
}

std::optional<std::string> assertion_problem(const Assertion& a) {
  switch (a.kind) {
    case AssertionKind::url_matches:
      if (a.operand.empty()) return "url_matches requires a pattern operand";
      try {
        std::regex re(a.operand);
      } catch (const std::regex_error&) {
        return "url_matches operand is not a valid regular expression";
      }
      break;
    case AssertionKind::count_compare:
      if (!parses_as_number(a.operand)) return "count_compare operand must be a number";
      if (!a.comparator) return "count_compare requires a comparator";
      if (a.target.empty()) return "count_compare requires a target";
      break;
    case AssertionKind::element_visible:
    case AssertionKind::text_equals:
      if (a.target.empty()) return std::string(to_string(a.kind)) + " requires a target";
      break;
  }
  return std::nullopt;
}

std::string resolve_placeholders(const std::string& text,
                                 const std::map<std::string, std::string>& data) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string::npos) break;
    const auto close = text.find("}}", open + 2);
    if (close == std::string::npos) break;
    out.append(text, pos, open - pos);
    const auto key = text.substr(open + 2, close - open - 2);
    if (auto it = data.find(key); it != data.end()) {
      out += it->second;
    } else {
      out.append(text, open, close + 2 - open);
    }
    pos = close + 2;
  }
  out.append(text, pos);
  return out;
}

ValidationResult validate_test_case(const TestCase& tc, const UserStory* story) {
  ValidationResult r;
  if (tc.id.empty()) error(r, "id", "must not be empty");

  if (tc.steps.empty()) error(r, "steps", "must not be empty");
  std::set<int> seen_indices;
  for (std::size_t i = 0; i < tc.steps.size(); ++i) {
    const auto& step = tc.steps[i];
    const auto base = "steps[" + std::to_string(i) + "]";
    if (!seen_indices.insert(step.index).second) {
      error(r, base + ".index", "duplicate step index " + std::to_string(step.index));
    } else if (step.index != static_cast<int>(i) + 1) {
      error(r, base + ".index",
            "step indices must be contiguous from 1; expected " + std::to_string(i + 1));
    }
    if (step.instruction.empty()) error(r, base + ".instruction", "must not be empty");
    if (step.action_hint) {
      if (step.action_hint->kind == ActionKind::emit_verdict) {
        error(r, base + ".action_hint", "emit_verdict is not a valid step action");
      } else if (auto problem = action_problem(*step.action_hint)) {
        error(r, base + ".action_hint", *problem);
      }
    }
  }

  if (tc.expected_results.empty()) error(r, "expected_results", "must not be empty");
  for (std::size_t i = 0; i < tc.expected_results.size(); ++i) {
    const auto& e = tc.expected_results[i];
    if (e.assertion) {
      if (auto problem = assertion_problem(*e.assertion)) {
        error(r, "expected_results[" + std::to_string(i) + "].assertion", *problem);
      }
    }
  }

  if (tc.provenance.kind == ProvenanceKind::mutant) {
    if (tc.provenance.origin_id.empty()) error(r, "provenance.origin", "mutant requires an origin id");
    if (!tc.provenance.mutation) error(r, "provenance.mutation", "mutant requires a mutation kind");
  }

  if (story != nullptr) {
    std::set<std::string> known;
    for (const auto& ac : story->acceptance_criteria) known.insert(ac.id);
    for (const auto& ref : tc.ac_refs) {
      if (!known.count(ref)) {
        error(r, "ac_refs", "references unknown acceptance criterion " + ref + " of story " + story->id);
      }
    }
  }

  std::string haystack;
  for (const auto& step : tc.steps) {
    haystack += step.instruction + "\n";
    if (step.action_hint) {
      haystack += step.action_hint->target + "\n";
      if (step.action_hint->value) haystack += *step.action_hint->value + "\n";
    }
  }
  const auto haystack_lower = lower(haystack);
  for (const auto& [key, value] : tc.test_data) {
    const bool by_key = haystack_lower.find(lower(key)) != std::string::npos;
    const bool by_value = !value.empty() && haystack.find(value) != std::string::npos;
    if (!by_key && !by_value) {
      r.issues.push_back({"test_data." + key, "test data is not referenced by any step", Severity::warning});
    }
  }
  return r;
}

}  // namespace aqua
