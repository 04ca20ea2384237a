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

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/agent/types.hpp"
#include "aqua/core/model.hpp"

namespace aqua::quality {

// The case has nothing of the requested kind to mutate.
class NoMutableFieldError : public Error {
 public:
  using Error::Error;
};

struct MutantCase {
  TestCase mutant;  // provenance mutant, carrying origin, kind and diff
  std::string origin_id;
  MutationKind kind = MutationKind::data_corruption;
  MutationDiff diff;
};

// "<origin>~<kind>-<seed>"
std::string mutant_id(const std::string& origin_id, MutationKind kind, std::uint64_t seed);

// Single-point, terminal mutation:
//   data_corruption         a test data value typed into a field the store
//                           validates (user-name, password, postal-code), or
//                           any typed value when none is
//   expectation_corruption  an assertion operand (a target for
//                           element_visible) changed so it cannot hold
//   step_corruption         a click/type_text/select_option hint retargeted
//                           to a selector that does not exist
// Deterministic in the seed.
MutantCase mutate_case(const TestCase& tc, MutationKind kind, std::uint64_t seed);

// Recovers the mutant view of a case read back from disk. Throws Error when
// the provenance is not a mutant with a diff.
MutantCase as_mutant(const TestCase& tc);

// JSON paths at which two documents differ, leaves only.
std::vector<std::string> differing_paths(const nlohmann::json& a, const nlohmann::json& b);

struct MutationAudit {
  std::string mutant_id;
  MutationKind kind = MutationKind::data_corruption;
  agent::VerdictStatus final_status = agent::VerdictStatus::inconclusive;
  bool used_mutated_inputs = false;
  bool mutation_corrected = false;
  bool caught = false;
  bool disagreement = false;

  friend bool operator==(const MutationAudit&, const MutationAudit&) = default;
};

// Scans the executed actions for the mutated and the original value (whole
// target or value matches). Throws Error when the record belongs to another
// case.
MutationAudit audit_mutant(const MutantCase& mutant, const agent::ExecutionRecord& record);

nlohmann::json to_json(const MutationAudit& audit);
MutationAudit mutation_audit_from_json(const nlohmann::json& j);

}  // namespace aqua::quality
