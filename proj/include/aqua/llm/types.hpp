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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aqua/core/error.hpp"

namespace aqua::llm {

enum class Role { system, user, assistant, tool };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct Message {
  Role role = Role::user;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

struct ChatRequest {
  std::string model;
  std::vector<Message> messages;
  double temperature = 0.0;
  int max_output_tokens = 2048;
  // Name of the expected output schema; live providers are asked for JSON.
  std::optional<std::string> structured_output;
  // Logical key for hermetic transcripts, e.g. "generate/US-LOGIN/1". Never
  // sent over the wire.
  std::string tag;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  std::int64_t total() const noexcept { return prompt_tokens + completion_tokens; }

  Usage& operator+=(const Usage& other) noexcept {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  friend Usage operator+(Usage a, const Usage& b) noexcept { return a += b; }
  friend bool operator==(const Usage&, const Usage&) = default;
};

enum class FinishReason { stop, length, error };

std::string_view to_string(FinishReason reason);

struct ChatResponse {
  std::string content;
  Usage usage;
  FinishReason finish_reason = FinishReason::stop;
};

class ProviderError : public Error {
 public:
  enum class Kind { transport, rate_limited, http_status, malformed_payload, unmatched_key, configuration };

  ProviderError(Kind kind, std::string message) : Error(std::move(message)), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Token estimate used for budgeting: ceil(characters / 4).
constexpr std::int64_t estimate_tokens(std::string_view text) noexcept {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

std::int64_t estimate_prompt_tokens(const ChatRequest& request) noexcept;

// SHA-256 over the role/content sequence of the request messages.
std::string request_digest(const ChatRequest& request);

}  // namespace aqua::llm
