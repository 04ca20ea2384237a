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
#include <set>
#include <span>
#include <string>

#include "aqua/core/model.hpp"
#include "aqua/util/rational.hpp"

namespace aqua {

// AC id -> ids of the cases that reference it. Keys are exactly the story's
// acceptance criteria.
struct CoverageMap {
  std::map<std::string, std::set<std::string>> covering;

  Rational percent_covered() const;
  std::set<std::string> covered_ids() const;
  std::set<std::string> uncovered_ids() const;

  friend bool operator==(const CoverageMap&, const CoverageMap&) = default;
};

CoverageMap compute_coverage(const UserStory& story, std::span<const TestCase> cases);

}  // namespace aqua
