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

#include "aqua/llm/http_client.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "aqua/llm/embedding.hpp"

namespace aqua::llm {

using nlohmann::json;

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int retry, double jitter_unit) {
  const double base = static_cast<double>(policy.base_backoff.count()) * std::ldexp(1.0, retry - 1);
  const double scaled = policy.jitter ? base * (0.5 + 0.5 * jitter_unit) : base;
  return std::chrono::milliseconds(static_cast<std::int64_t>(scaled));
}

namespace {

class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<>& s_;
};

std::string trim_slash(std::string url) {
  while (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

}  // namespace

HttpChatClient::HttpChatClient(ProviderConfig config, std::shared_ptr<net::HttpTransport> transport,
                               Sleeper sleeper, EnvLookup env)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(sleeper ? std::move(sleeper) : Sleeper([](auto d) { std::this_thread::sleep_for(d); })),
      env_(env ? std::move(env) : EnvLookup([](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
      })),
      slots_(std::max(1, config_.max_concurrent_requests)) {
  if (config_.retry.max_attempts < 1) {
    throw ProviderError(ProviderError::Kind::configuration, "retry.max_attempts must be >= 1");
  }
}

std::string HttpChatClient::credential() const {
  auto key = env_(config_.credential_env_var);
  if (!key || key->empty()) {
    throw ProviderError(ProviderError::Kind::configuration,
                        "credential environment variable " + config_.credential_env_var + " is not set");
  }
  return *key;
}

net::HttpResponse HttpChatClient::post_with_retry(const std::string& path, const std::string& body) {
  net::HttpRequest req;
  req.method = net::Method::post;
  req.url = trim_slash(config_.base_url) + path;
  req.headers = {{"Authorization", "Bearer " + credential()}, {"Content-Type", "application/json"}};
  req.body = body;
  req.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config_.timeout);

  std::mt19937_64 rng(std::random_device{}());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::string last_problem;
  bool rate_limited = false;

  SlotGuard slot(slots_);
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    if (attempt > 1) sleeper_(backoff_delay(config_.retry, attempt - 1, unit(rng)));
    try {
      auto resp = transport_->send(req);
      if (resp.status >= 200 && resp.status < 300) return resp;
      if (resp.status == 429) {
        rate_limited = true;
        last_problem = "HTTP 429";
        continue;
      }
      if (resp.status >= 500) {
        rate_limited = false;
        last_problem = "HTTP " + std::to_string(resp.status);
        continue;
      }
      throw ProviderError(ProviderError::Kind::http_status,
                          "provider returned HTTP " + std::to_string(resp.status) + ": " + resp.body.substr(0, 200));
    } catch (const net::TransportError& e) {
      rate_limited = false;
      last_problem = e.what();
    }
  }
  const auto attempts = std::to_string(config_.retry.max_attempts);
  if (rate_limited) {
    throw ProviderError(ProviderError::Kind::rate_limited, "rate limit exhausted after " + attempts + " attempts");
  }
  throw ProviderError(ProviderError::Kind::transport,
                      "transport failure after " + attempts + " attempts: " + last_problem);
}

ChatResponse HttpChatClient::complete(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  json body{{"model", request.model},
            {"messages", std::move(messages)},
            {"temperature", request.temperature},
            {"max_tokens", request.max_output_tokens}};
  if (request.structured_output) body["response_format"] = {{"type", "json_object"}};

  const auto resp = post_with_retry("/chat/completions", body.dump());
  try {
    const auto j = json::parse(resp.body);
    const auto& choice = j.at("choices").at(0);
    ChatResponse out;
    out.content = choice.at("message").at("content").get<std::string>();
    const auto& usage = j.at("usage");
    out.usage = {usage.at("prompt_tokens").get<std::int64_t>(), usage.at("completion_tokens").get<std::int64_t>()};
    if (out.usage.prompt_tokens < 0 || out.usage.completion_tokens < 0) {
      throw ProviderError(ProviderError::Kind::malformed_payload, "negative token counts in provider usage");
    }
    const auto finish = choice.value("finish_reason", std::string("stop"));
    out.finish_reason = finish == "stop" ? FinishReason::stop
                        : finish == "length" ? FinishReason::length
                                             : FinishReason::error;
    return out;
  } catch (const json::exception& e) {
    throw ProviderError(ProviderError::Kind::malformed_payload, std::string("malformed provider payload: ") + e.what());
  }
}

std::vector<Embedding> HttpChatClient::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw Error("embed requires at least one text");
  json body{{"model", config_.embedding_model}, {"input", json(std::vector<std::string>(texts.begin(), texts.end()))}};
  const auto resp = post_with_retry("/embeddings", body.dump());
  try {
    const auto j = json::parse(resp.body);
    const auto& data = j.at("data");
    if (data.size() != texts.size()) {
      throw ProviderError(ProviderError::Kind::malformed_payload, "embedding count does not match input count");
    }
    std::vector<Embedding> out(texts.size());
    for (const auto& item : data) {
      const auto idx = item.value("index", std::size_t{0});
      if (idx >= out.size()) throw ProviderError(ProviderError::Kind::malformed_payload, "embedding index out of range");
      out[idx] = item.at("embedding").get<Embedding>();
      normalize(out[idx]);
    }
    return out;
  } catch (const json::exception& e) {
    throw ProviderError(ProviderError::Kind::malformed_payload, std::string("malformed embedding payload: ") + e.what());
  }
}

}  // namespace aqua::llm
