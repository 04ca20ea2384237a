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

#include "aqua/core/model.hpp"

namespace aqua {

// Enumerates invariant violations as data. With a story attached, ac_refs
// must name the story's acceptance criteria. Test data keys that no step
// mentions (by key or by value) produce warnings.
ValidationResult validate_test_case(const TestCase& tc, const UserStory* story = nullptr);

// Well-formedness of a single action, as used by step hints and agent
// actions. Returns an error message, or nullopt when well formed.
std::optional<std::string> action_problem(const Action& action);

// Well-formedness of an assertion's kind-specific fields.
std::optional<std::string> assertion_problem(const Assertion& assertion);

// Substitutes {{key}} occurrences from test data. Unknown keys are kept.
std::string resolve_placeholders(const std::string& text,
                                 const std::map<std::string, std::string>& data);

}  // namespace aqua
