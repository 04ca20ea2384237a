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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aqua {

struct AcceptanceCriterion {
  std::string id;
  std::string text;

  friend bool operator==(const AcceptanceCriterion&, const AcceptanceCriterion&) = default;
};

struct UserStory {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> preconditions;
  std::vector<AcceptanceCriterion> acceptance_criteria;

  friend bool operator==(const UserStory&, const UserStory&) = default;
};

// Browser-level action vocabulary shared by step hints, the agent and the
// simulator.
enum class ActionKind {
  navigate,
  click,
  type_text,
  select_option,
  read,
  dismiss_popup,
  go_back,
  assert_visible,
  emit_verdict,
};

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view text);

// An action without the agent's rationale. `value` holds the URL for
// navigate, the text for type_text, the option for select_option, the
// expected text for assert_visible and the verdict line for emit_verdict.
// Values may reference test data as {{key}}.
struct Action {
  ActionKind kind = ActionKind::click;
  std::string target;
  std::optional<std::string> value;

  friend bool operator==(const Action&, const Action&) = default;
};

struct Step {
  int index = 0;
  std::string instruction;
  std::optional<Action> action_hint;

  friend bool operator==(const Step&, const Step&) = default;
};

enum class AssertionKind { url_matches, element_visible, text_equals, count_compare };
enum class Comparator { less, greater, equal };

std::string_view to_string(AssertionKind kind);
AssertionKind parse_assertion_kind(std::string_view text);
std::string_view to_string(Comparator cmp);
Comparator parse_comparator(std::string_view text);

// Machine-checkable form of an expected result. `operand` is the regex for
// url_matches, the expected text for text_equals, the number for
// count_compare, and unused for element_visible.
struct Assertion {
  AssertionKind kind = AssertionKind::element_visible;
  std::string target;
  std::string operand;
  std::optional<Comparator> comparator;

  friend bool operator==(const Assertion&, const Assertion&) = default;
};

struct Expectation {
  std::string text;
  std::optional<Assertion> assertion;

  friend bool operator==(const Expectation&, const Expectation&) = default;
};

enum class MutationKind { data_corruption, expectation_corruption, step_corruption };

std::string_view to_string(MutationKind kind);
MutationKind parse_mutation_kind(std::string_view text);

// Single-point change applied to a mutant, addressed by field path.
struct MutationDiff {
  std::string path;
  std::string original;
  std::string mutated;

  friend bool operator==(const MutationDiff&, const MutationDiff&) = default;
};

enum class ProvenanceKind { generated, manual, mutant };

std::string_view to_string(ProvenanceKind kind);

struct Provenance {
  ProvenanceKind kind = ProvenanceKind::manual;
  // Set only for mutants.
  std::string origin_id;
  std::optional<MutationKind> mutation;
  std::optional<MutationDiff> diff;

  static Provenance generated() { return {ProvenanceKind::generated, {}, {}, {}}; }
  static Provenance manual() { return {ProvenanceKind::manual, {}, {}, {}}; }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TestCase {
  std::string id;
  std::string title;
  std::map<std::string, std::string> test_data;
  std::vector<std::string> preconditions;
  std::vector<Step> steps;
  std::vector<Expectation> expected_results;
  std::optional<std::vector<std::string>> postconditions;
  std::vector<std::string> ac_refs;
  Provenance provenance;

  friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct Checkpoint {
  std::size_t expectation_index = 0;
  Assertion assertion;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct CheckpointSet {
  std::vector<Checkpoint> checkpoints;
  // Expectations without a structured assertion; only a judge can decide them.
  std::vector<std::size_t> judge_only;
};

enum class Severity { error, warning };

struct ValidationIssue {
  std::string path;
  std::string message;
  Severity severity = Severity::error;
};

struct ValidationResult {
  bool valid = true;
  std::vector<ValidationIssue> issues;

  bool has_issue_at(std::string_view path) const;
};

}  // namespace aqua
