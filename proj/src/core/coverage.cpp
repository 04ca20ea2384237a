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

#include "aqua/core/coverage.hpp"

namespace aqua {

Rational CoverageMap::percent_covered() const {
  if (covering.empty()) return Rational(0);
  return Rational(static_cast<std::int64_t>(covered_ids().size()), static_cast<std::int64_t>(covering.size()));
}

std::set<std::string> CoverageMap::covered_ids() const {
  std::set<std::string> out;
  for (const auto& [ac, cases] : covering)
    if (!cases.empty()) out.insert(ac);
  return out;
}

std::set<std::string> CoverageMap::uncovered_ids() const {
  std::set<std::string> out;
  for (const auto& [ac, cases] : covering)
    if (cases.empty()) out.insert(ac);
  return out;
}

CoverageMap compute_coverage(const UserStory& story, std::span<const TestCase> cases) {
  CoverageMap map;
  for (const auto& ac : story.acceptance_criteria) map.covering[ac.id];
  for (const auto& tc : cases)
    for (const auto& ref : tc.ac_refs)
      if (auto it = map.covering.find(ref); it != map.covering.end()) it->second.insert(tc.id);
  return map;
}

}  // namespace aqua
