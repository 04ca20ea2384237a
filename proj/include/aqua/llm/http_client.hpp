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

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "aqua/llm/client.hpp"
#include "aqua/net/transport.hpp"

namespace aqua::llm {

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_backoff{500};
  bool jitter = true;
};

struct ProviderConfig {
  std::string base_url = "https://api.openai.com/v1";
  // Credentials are read from this environment variable only.
  std::string credential_env_var = "OPENAI_API_KEY";
  std::chrono::seconds timeout{60};
  RetryPolicy retry;
  std::string embedding_model = "text-embedding-3-small";
  int max_concurrent_requests = 4;
};

// Backoff before the given retry (1-based): base * 2^(retry-1), scaled into
// [0.5, 1.0) of that value when jitter is on.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double jitter_unit);

using Sleeper = std::function<void(std::chrono::milliseconds)>;
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

// Chat-completions over HTTP. Transport failures, HTTP 429 and 5xx are
// retried up to max_attempts; malformed payloads fail immediately.
class HttpChatClient final : public ChatClient {
 public:
  HttpChatClient(ProviderConfig config, std::shared_ptr<net::HttpTransport> transport,
                 Sleeper sleeper = {}, EnvLookup env = {});

  ChatResponse complete(const ChatRequest& request) override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

  const ProviderConfig& config() const noexcept { return config_; }

 private:
  net::HttpResponse post_with_retry(const std::string& path, const std::string& body);
  std::string credential() const;

  ProviderConfig config_;
  std::shared_ptr<net::HttpTransport> transport_;
  Sleeper sleeper_;
  EnvLookup env_;
  std::counting_semaphore<> slots_;
};

}  // namespace aqua::llm
