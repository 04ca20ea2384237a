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

#include "aqua/generation/autocorrect.hpp"

namespace aqua::generation {

GeneratedSuite autocorrect_loop(GenerationRequest request, const AutocorrectionConfig& config,
                                llm::ChatClient& client, const PromptTemplates& templates) {
  if (config.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  llm::Usage total;
  for (int i = 1;; ++i) {
    auto suite = generate_cases(request, client, templates, i);
    auto report = judge_suite(suite.cases, request.story, request.context, client,
                              config.judge_model.empty() ? request.model : config.judge_model, templates, i,
                              config.judge_temperature);
    total += suite.usage + report.usage;
    const bool done = report.clean() || i == config.max_iterations;
    if (!done) {
      auto feedback = to_json(report);
      feedback.erase("usage");
      request.feedback = feedback.dump(2);
    }
    suite.iterations = i;
    suite.report = std::move(report);
    if (done) {
      suite.usage = total;
      return suite;
    }
  }
}

}  // namespace aqua::generation
