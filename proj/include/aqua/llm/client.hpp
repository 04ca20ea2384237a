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

#include <span>
#include <string>
#include <vector>

#include "aqua/llm/types.hpp"

namespace aqua::llm {

using Embedding = std::vector<double>;

// Chat-completion and embedding provider. Implementations are safe for
// concurrent calls.
class ChatClient {
 public:
  virtual ~ChatClient() = default;

  virtual ChatResponse complete(const ChatRequest& request) = 0;

  // One unit-norm vector per text. Throws on empty input.
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
};

}  // namespace aqua::llm
