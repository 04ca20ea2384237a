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

#include "aqua/core/model.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "aqua/core/error.hpp"

namespace aqua {

namespace {

template <typename E, std::size_t N>
E lookup(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view text,
         std::string_view what) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  throw SchemaError(std::string(what), "unknown value '" + std::string(text) + "'");
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<ActionKind, std::string_view>, 9> kActionKinds{{
    {ActionKind::navigate, "navigate"},
    {ActionKind::click, "click"},
    {ActionKind::type_text, "type_text"},
    {ActionKind::select_option, "select_option"},
    {ActionKind::read, "read"},
    {ActionKind::dismiss_popup, "dismiss_popup"},
    {ActionKind::go_back, "go_back"},
    {ActionKind::assert_visible, "assert"},
    {ActionKind::emit_verdict, "emit_verdict"},
}};

constexpr std::array<std::pair<AssertionKind, std::string_view>, 4> kAssertionKinds{{
    {AssertionKind::url_matches, "url_matches"},
    {AssertionKind::element_visible, "element_visible"},
    {AssertionKind::text_equals, "text_equals"},
    {AssertionKind::count_compare, "count_compare"},
}};

constexpr std::array<std::pair<Comparator, std::string_view>, 3> kComparators{{
    {Comparator::less, "<"},
    {Comparator::greater, ">"},
    {Comparator::equal, "="},
}};

constexpr std::array<std::pair<MutationKind, std::string_view>, 3> kMutationKinds{{
    {MutationKind::data_corruption, "data_corruption"},
    {MutationKind::expectation_corruption, "expectation_corruption"},
    {MutationKind::step_corruption, "step_corruption"},
}};

constexpr std::array<std::pair<ProvenanceKind, std::string_view>, 3> kProvenanceKinds{{
    {ProvenanceKind::generated, "generated"},
    {ProvenanceKind::manual, "manual"},
    {ProvenanceKind::mutant, "mutant"},
}};

}  // namespace

std::string_view to_string(ActionKind kind) { return name_of(kActionKinds, kind); }
ActionKind parse_action_kind(std::string_view text) { return lookup(kActionKinds, text, "action"); }

std::string_view to_string(AssertionKind kind) { return name_of(kAssertionKinds, kind); }
AssertionKind parse_assertion_kind(std::string_view text) {
  return lookup(kAssertionKinds, text, "assertion.kind");
}

std::string_view to_string(Comparator cmp) { return name_of(kComparators, cmp); }
Comparator parse_comparator(std::string_view text) {
  return lookup(kComparators, text, "assertion.comparator");
}

std::string_view to_string(MutationKind kind) { return name_of(kMutationKinds, kind); }
MutationKind parse_mutation_kind(std::string_view text) {
  return lookup(kMutationKinds, text, "mutation");
}

std::string_view to_string(ProvenanceKind kind) { return name_of(kProvenanceKinds, kind); }

bool ValidationResult::has_issue_at(std::string_view path) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const ValidationIssue& i) { return i.path == path; });
}

}  // namespace aqua
