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

#include <string>

#include "aqua/generation/generator.hpp"

namespace aqua::generation {

struct AutocorrectionConfig {
  int max_iterations = 3;
  std::string judge_model;
  double judge_temperature = 0.0;
};

// generate -> judge rounds. Each round's judge report is fed back to the
// generator; stops on a clean report or after max_iterations. The result is
// the last round's suite with its report attached and usage summed over all
// generator and judge calls.
GeneratedSuite autocorrect_loop(GenerationRequest request, const AutocorrectionConfig& config,
                                llm::ChatClient& client, const PromptTemplates& templates = PromptTemplates::defaults());

}  // namespace aqua::generation
