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

#include "aqua/core/checkpoints.hpp"

#include "aqua/core/error.hpp"
#include "aqua/core/validation.hpp"

namespace aqua {

CheckpointSet compile_checkpoints(const TestCase& tc) {
  CheckpointSet out;
  for (std::size_t i = 0; i < tc.expected_results.size(); ++i) {
    const auto& assertion = tc.expected_results[i].assertion;
    if (!assertion) {
      out.judge_only.push_back(i);
      continue;
    }
    if (auto problem = assertion_problem(*assertion)) {
      throw SchemaError("expected_results[" + std::to_string(i) + "].assertion.operand", *problem);
    }
    out.checkpoints.push_back({i, *assertion});
  }
  return out;
}

}  // namespace aqua
