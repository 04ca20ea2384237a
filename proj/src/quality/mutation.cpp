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

#include "aqua/quality/mutation.hpp"

#include <random>
#include <regex>
#include <set>

#include "aqua/core/test_case_io.hpp"

namespace aqua::quality {
namespace {

using nlohmann::json;

const std::set<std::string, std::less<>> kValidatedInputs{"user-name", "password", "postal-code"};

std::string tag(std::mt19937_64& rng) {
  std::string out;
  std::uniform_int_distribution<int> letter('a', 'z');
  for (int i = 0; i < 4; ++i) out += static_cast<char>(letter(rng));
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

std::vector<std::string> referenced_keys(const std::string& text) {
  static const std::regex ref(R"(\{\{\s*([A-Za-z0-9_.-]+)\s*\}\})");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ref); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1].str());
  return out;
}

MutationDiff corrupt_data(TestCase& tc, std::mt19937_64& rng) {
  if (tc.test_data.empty()) throw NoMutableFieldError("data_corruption needs test data");
  for (const auto& e : tc.expected_results)
    if (e.assertion && e.assertion->target == "error")
      throw NoMutableFieldError("data_corruption: the case already expects a rejection, corrupted data would pass");
  std::vector<std::string> validated;
  std::vector<std::string> typed;
  for (const auto& s : tc.steps) {
    if (!s.action_hint || s.action_hint->kind != ActionKind::type_text || !s.action_hint->value) continue;
    for (const auto& key : referenced_keys(*s.action_hint->value)) {
      if (!tc.test_data.count(key)) continue;
      auto& bucket = kValidatedInputs.count(s.action_hint->target) ? validated : typed;
      if (std::find(bucket.begin(), bucket.end(), key) == bucket.end()) bucket.push_back(key);
    }
  }
  const auto& keys = validated.empty() ? typed : validated;
  if (keys.empty()) throw NoMutableFieldError("data_corruption: no test data value is typed into the application");
  const auto key = pick(keys, rng);
  auto& value = tc.test_data.at(key);
  MutationDiff diff{"test_data." + key, value, value + "-" + tag(rng)};
  value = diff.mutated;
  return diff;
}

MutationDiff corrupt_expectation(TestCase& tc, std::mt19937_64& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < tc.expected_results.size(); ++i)
    if (tc.expected_results[i].assertion) candidates.push_back(i);
  if (candidates.empty()) throw NoMutableFieldError("expectation_corruption needs a structured assertion");
  const auto i = pick(candidates, rng);
  auto& a = *tc.expected_results[i].assertion;
  const auto base = "expected_results[" + std::to_string(i) + "].assertion.";
  const auto t = tag(rng);
  switch (a.kind) {
    case AssertionKind::url_matches: {
      MutationDiff diff{base + "operand", a.operand, "/missing-" + t + "\\.html$"};
      a.operand = diff.mutated;
      return diff;
    }
    case AssertionKind::text_equals: {
      MutationDiff diff{base + "operand", a.operand, a.operand + "-" + t};
      a.operand = diff.mutated;
      return diff;
    }
    case AssertionKind::count_compare: {
      const long long n = std::stoll(a.operand);
      const auto shift = std::uniform_int_distribution<long long>(1, 9)(rng);
      std::string mutated;
      switch (a.comparator.value_or(Comparator::equal)) {
        case Comparator::equal: mutated = std::to_string(n + shift * 1000); break;
        case Comparator::less: mutated = "-" + std::to_string(shift); break;
        case Comparator::greater: mutated = std::to_string(1000000 + n + shift); break;
      }
      MutationDiff diff{base + "operand", a.operand, mutated};
      a.operand = mutated;
      return diff;
    }
    case AssertionKind::element_visible: {
      MutationDiff diff{base + "target", a.target, a.target + "-" + t};
      a.target = diff.mutated;
      return diff;
    }
  }
  throw NoMutableFieldError("unsupported assertion kind");
}

MutationDiff corrupt_step(TestCase& tc, std::mt19937_64& rng) {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < tc.steps.size(); ++i) {
    const auto& h = tc.steps[i].action_hint;
    if (h && !h->target.empty() &&
        (h->kind == ActionKind::click || h->kind == ActionKind::type_text || h->kind == ActionKind::select_option))
      candidates.push_back(i);
  }
  if (candidates.empty()) throw NoMutableFieldError("step_corruption needs a click, type_text or select_option hint");
  const auto i = pick(candidates, rng);
  auto& target = tc.steps[i].action_hint->target;
  MutationDiff diff{"steps[" + std::to_string(i) + "].action_hint.target", target, target + "-" + tag(rng)};
  target = diff.mutated;
  return diff;
}

void collect_paths(const json& a, const json& b, const std::string& path, std::vector<std::string>& out) {
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (auto it = a.begin(); it != a.end(); ++it) keys.insert(it.key());
    for (auto it = b.begin(); it != b.end(); ++it) keys.insert(it.key());
    for (const auto& k : keys) {
      const auto sub = path.empty() ? k : path + "." + k;
      if (!a.contains(k) || !b.contains(k))
        out.push_back(sub);
      else
        collect_paths(a.at(k), b.at(k), sub, out);
    }
    return;
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) collect_paths(a[i], b[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  if (a != b) out.push_back(path);
}

bool action_uses(const Action& a, const std::string& value) {
  return !value.empty() && (a.target == value || a.value == value);
}

}  // namespace

std::string mutant_id(const std::string& origin_id, MutationKind kind, std::uint64_t seed) {
  return origin_id + "~" + std::string(to_string(kind)) + "-" + std::to_string(seed);
}

MutantCase mutate_case(const TestCase& tc, MutationKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MutantCase out;
  out.mutant = tc;
  out.origin_id = tc.id;
  out.kind = kind;
  switch (kind) {
    case MutationKind::data_corruption: out.diff = corrupt_data(out.mutant, rng); break;
    case MutationKind::expectation_corruption: out.diff = corrupt_expectation(out.mutant, rng); break;
    case MutationKind::step_corruption: out.diff = corrupt_step(out.mutant, rng); break;
  }
  out.mutant.id = mutant_id(tc.id, kind, seed);
  out.mutant.provenance = {ProvenanceKind::mutant, tc.id, kind, out.diff};
  return out;
}

MutantCase as_mutant(const TestCase& tc) {
  const auto& p = tc.provenance;
  if (p.kind != ProvenanceKind::mutant || !p.mutation || !p.diff) throw Error(tc.id + " is not a mutant case");
  return {tc, p.origin_id, *p.mutation, *p.diff};
}

std::vector<std::string> differing_paths(const json& a, const json& b) {
  std::vector<std::string> out;
  collect_paths(a, b, "", out);
  return out;
}

MutationAudit audit_mutant(const MutantCase& mutant, const agent::ExecutionRecord& record) {
  if (record.case_id != mutant.mutant.id)
    throw Error("record for " + record.case_id + " cannot audit mutant " + mutant.mutant.id);
  MutationAudit out;
  out.mutant_id = mutant.mutant.id;
  out.kind = mutant.kind;
  out.final_status = record.final_verdict.status;
  out.disagreement = record.disagreement;
  out.caught = record.final_verdict.status == agent::VerdictStatus::failed;

  bool original_used = false;
  for (const auto& e : record.events) {
    if (e.action.kind == ActionKind::emit_verdict) continue;
    out.used_mutated_inputs = out.used_mutated_inputs || action_uses(e.action, mutant.diff.mutated);
    original_used = original_used || action_uses(e.action, mutant.diff.original);
  }

  bool self_pass_over_failed_checkpoint = false;
  if (mutant.kind == MutationKind::expectation_corruption && record.agent_verdict &&
      record.agent_verdict->status == agent::VerdictStatus::passed) {
    static const std::regex index(R"(^expected_results\[(\d+)\])");
    std::smatch m;
    if (std::regex_search(mutant.diff.path, m, index)) {
      const auto i = std::stoul(m[1].str());
      for (const auto& c : record.checkpoints)
        if (c.expectation_index == i && c.status == agent::CheckpointStatus::failed) self_pass_over_failed_checkpoint = true;
    }
  }
  out.mutation_corrected = original_used || self_pass_over_failed_checkpoint;
  return out;
}

json to_json(const MutationAudit& a) {
  return {{"mutant_id", a.mutant_id},
          {"kind", to_string(a.kind)},
          {"final_status", agent::to_string(a.final_status)},
          {"used_mutated_inputs", a.used_mutated_inputs},
          {"mutation_corrected", a.mutation_corrected},
          {"caught", a.caught},
          {"disagreement", a.disagreement}};
}

MutationAudit mutation_audit_from_json(const json& j) {
  try {
    MutationAudit a;
    a.mutant_id = j.at("mutant_id").get<std::string>();
    a.kind = parse_mutation_kind(j.at("kind").get<std::string>());
    a.final_status = agent::parse_verdict_status(j.at("final_status").get<std::string>());
    a.used_mutated_inputs = j.at("used_mutated_inputs").get<bool>();
    a.mutation_corrected = j.at("mutation_corrected").get<bool>();
    a.caught = j.at("caught").get<bool>();
    a.disagreement = j.at("disagreement").get<bool>();
    return a;
  } catch (const json::exception& e) {
    throw SchemaError("mutation_audit", e.what());
  }
}

}  // namespace aqua::quality
