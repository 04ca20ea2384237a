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

#include "aqua/agent/verify.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "aqua/core/validation.hpp"

namespace aqua::agent {
namespace {

using browser::Observation;

bool is_descriptor(std::string_view target) {
  return std::any_of(target.begin(), target.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

const browser::Element* locate(const Observation& obs, std::string_view target) {
  if (target.starts_with("text=")) {
    const auto needle = target.substr(5);
    for (const auto& e : obs.visible_elements)
      if (e.text.find(needle) != std::string::npos) return &e;
    return nullptr;
  }
  return obs.find(target);
}

CheckpointResult result(const Checkpoint& cp, CheckpointStatus status, std::string detail) {
  return {cp.expectation_index, status, std::move(detail)};
}

bool compare(double lhs, Comparator cmp, double rhs) {
  switch (cmp) {
    case Comparator::less: return lhs < rhs;
    case Comparator::greater: return lhs > rhs;
    case Comparator::equal: return lhs == rhs;
  }
  return false;
}

}  // namespace

std::optional<long long> extract_count(const Observation& obs, std::string_view target) {
  if (target.ends_with("*")) {
    const auto prefix = target.substr(0, target.size() - 1);
    return std::count_if(obs.visible_elements.begin(), obs.visible_elements.end(),
                         [&](const browser::Element& e) { return std::string_view(e.selector).starts_with(prefix); });
  }
  const auto* e = obs.find(target);
  if (!e) return 0;
  try {
    std::size_t used = 0;
    const long long n = std::stoll(e->text, &used);
    if (used == e->text.size()) return n;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

CheckpointResult evaluate_checkpoint(const Checkpoint& cp, std::span<const Observation> history,
                                     const std::map<std::string, std::string>& test_data) {
  const auto& a = cp.assertion;
  const auto operand = resolve_placeholders(a.operand, test_data);
  if (history.empty()) return result(cp, CheckpointStatus::inconclusive, "no observations recorded");
  if (a.kind != AssertionKind::url_matches && is_descriptor(a.target))
    return result(cp, CheckpointStatus::inconclusive, "target '" + a.target + "' is not a selector");

  const auto& last = history.back();
  switch (a.kind) {
    case AssertionKind::url_matches: {
      if (history.size() < 2) return result(cp, CheckpointStatus::inconclusive, "no action was executed");
      const std::regex re(operand);
      for (const auto& obs : history.subspan(1))
        if (std::regex_search(obs.url, re)) return result(cp, CheckpointStatus::held, "url " + obs.url + " matches " + operand);
      return result(cp, CheckpointStatus::failed, "no visited url matches " + operand + "; last was " + last.url);
    }
    case AssertionKind::element_visible:
      if (locate(last, a.target)) return result(cp, CheckpointStatus::held, a.target + " is visible");
      return result(cp, CheckpointStatus::failed, a.target + " is not visible on " + last.url);
    case AssertionKind::text_equals: {
      const auto* e = locate(last, a.target);
      if (!e) return result(cp, CheckpointStatus::failed, a.target + " is not visible on " + last.url);
      if (e->text == operand) return result(cp, CheckpointStatus::held, a.target + " reads '" + operand + "'");
      return result(cp, CheckpointStatus::failed, a.target + " reads '" + e->text + "', expected '" + operand + "'");
    }
    case AssertionKind::count_compare: {
      const auto count = extract_count(last, a.target);
      if (!count) return result(cp, CheckpointStatus::inconclusive, a.target + " does not hold a count");
      const double expected = std::stod(operand);
      const auto cmp = a.comparator.value_or(Comparator::equal);
      const auto text = a.target + " counts " + std::to_string(*count) + ", expected " +
                        std::string(to_string(cmp)) + " " + operand;
      return result(cp, compare(static_cast<double>(*count), cmp, expected) ? CheckpointStatus::held : CheckpointStatus::failed,
                    text);
    }
  }
  return result(cp, CheckpointStatus::inconclusive, "unsupported assertion");
}

Resolution resolve_verdicts(const std::optional<Verdict>& agent, const Verdict& harness) {
  return {harness, agent && agent->status != harness.status};
}

HarnessResult verify_checkpoints(const ExecutionRecord& record, const CheckpointSet& checkpoints,
                                 std::span<const Observation> history,
                                 const std::map<std::string, std::string>& test_data) {
  HarnessResult out;
  for (const auto& cp : checkpoints.checkpoints) out.checkpoints.push_back(evaluate_checkpoint(cp, history, test_data));

  auto& v = out.verdict;
  v.source = VerdictSource::harness_checkpoints;
  if (record.guardrail_trip) {
    v.status = VerdictStatus::inconclusive;
    v.root_cause = "guardrail " + std::string(to_string(record.guardrail_trip->reason)) + " tripped at event " +
                   std::to_string(record.guardrail_trip->at_step);
    return out;
  }
  if (record.error) {
    v.status = VerdictStatus::inconclusive;
    v.root_cause = "run aborted: " + *record.error;
    return out;
  }
  if (out.checkpoints.empty()) {
    v.status = VerdictStatus::inconclusive;
    v.root_cause = "judge-only expectations";
    return out;
  }

  const auto failed = std::find_if(out.checkpoints.begin(), out.checkpoints.end(),
                                   [](const CheckpointResult& c) { return c.status == CheckpointStatus::failed; });
  if (failed == out.checkpoints.end()) {
    const auto open = std::find_if(out.checkpoints.begin(), out.checkpoints.end(),
                                   [](const CheckpointResult& c) { return c.status == CheckpointStatus::inconclusive; });
    if (open != out.checkpoints.end()) {
      v.status = VerdictStatus::inconclusive;
      v.root_cause = "expected result " + std::to_string(open->expectation_index + 1) + ": " + open->detail;
    } else {
      v.status = VerdictStatus::passed;
    }
    return out;
  }

  v.status = VerdictStatus::failed;
  v.root_cause = "expected result " + std::to_string(failed->expectation_index + 1) + ": " + failed->detail;
  for (const auto& e : record.events) {
    const auto* banner = e.observation.find("error");
    if (e.outcome != browser::ActionOutcome::element_not_found && !banner) continue;
    if (e.case_step) v.failing_step = std::to_string(*e.case_step);
    v.root_cause = banner ? banner->text
                          : std::string(to_string(e.action.kind)) + " " + e.action.target + ": " +
                                std::string(browser::to_string(e.outcome));
    break;
  }
  return out;
}

}  // namespace aqua::agent
