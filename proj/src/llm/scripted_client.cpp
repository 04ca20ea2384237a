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

#include "aqua/llm/scripted_client.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace aqua::llm {

using nlohmann::json;

ScriptedTranscript transcript_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("$", "transcript must be an object");
  ScriptedTranscript t;
  if (auto it = j.find("mode"); it != j.end()) {
    const auto mode = it->get<std::string>();
    if (mode == "keyed") {
      t.mode = ScriptedTranscript::Mode::keyed;
    } else if (mode == "sequential") {
      t.mode = ScriptedTranscript::Mode::sequential;
    } else {
      throw SchemaError("mode", "unknown transcript mode '" + mode + "'");
    }
  }
  t.strict = j.value("strict", true);
  const auto& entries = j.at("entries");
  if (!entries.is_array()) throw SchemaError("entries", "expected a list");
  std::set<std::string> keys;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto path = "entries[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    if (!e.is_object() || !e.contains("response")) throw SchemaError(path, "entry needs a response");
    TranscriptEntry entry;
    entry.match = e.value("match", std::string{});
    entry.response = e.at("response").get<std::string>();
    if (auto u = e.find("usage"); u != e.end()) {
      entry.synthetic_usage = {u->value("prompt_tokens", std::int64_t{0}),
                               u->value("completion_tokens", std::int64_t{0})};
      if (entry.synthetic_usage.prompt_tokens < 0 || entry.synthetic_usage.completion_tokens < 0) {
        throw SchemaError(path + ".usage", "token counts must be non-negative");
      }
    }
    if (t.mode == ScriptedTranscript::Mode::keyed) {
      if (entry.match.empty()) throw SchemaError(path + ".match", "keyed entries need a match key");
      if (!keys.insert(entry.match).second) {
        throw SchemaError(path + ".match", "duplicate match key '" + entry.match + "'");
      }
    }
    t.entries.push_back(std::move(entry));
  }
  return t;
}

ScriptedTranscript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read transcript " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return transcript_from_json(json::parse(ss.str()));
  } catch (const json::exception& e) {
    throw SchemaError(path.string(), e.what());
  }
}

json to_json(const ScriptedTranscript& t) {
  json entries = json::array();
  for (const auto& e : t.entries) {
    entries.push_back({{"match", e.match},
                       {"response", e.response},
                       {"usage", {{"prompt_tokens", e.synthetic_usage.prompt_tokens},
                                  {"completion_tokens", e.synthetic_usage.completion_tokens}}}});
  }
  return {{"mode", t.mode == ScriptedTranscript::Mode::keyed ? "keyed" : "sequential"},
          {"strict", t.strict},
          {"entries", std::move(entries)}};
}

ScriptedClient::ScriptedClient(ScriptedTranscript transcript, std::size_t embedding_dim)
    : transcript_(std::move(transcript)), embedding_dim_(embedding_dim) {}

ChatResponse ScriptedClient::complete(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  ++calls_;
  if (transcript_.mode == ScriptedTranscript::Mode::sequential) {
    if (transcript_.entries.empty() || (cursor_ >= transcript_.entries.size() && transcript_.strict)) {
      throw ProviderError(ProviderError::Kind::unmatched_key,
                          "scripted transcript exhausted after " + std::to_string(cursor_) + " responses");
    }
    const auto idx = std::min(cursor_, transcript_.entries.size() - 1);
    ++cursor_;
    const auto& e = transcript_.entries[idx];
    return {e.response, e.synthetic_usage, FinishReason::stop};
  }

  const auto digest = "sha256:" + request_digest(request);
  for (const auto& e : transcript_.entries) {
    if (e.match == digest || (!request.tag.empty() && e.match == request.tag)) {
      return {e.response, e.synthetic_usage, FinishReason::stop};
    }
  }
  if (transcript_.strict) {
    throw ProviderError(ProviderError::Kind::unmatched_key,
                        "no transcript entry for " + digest +
                            (request.tag.empty() ? std::string{} : " (tag " + request.tag + ")"));
  }
  std::string echo;
  for (auto it = request.messages.rbegin(); it != request.messages.rend(); ++it) {
    if (it->role == Role::user) {
      echo = it->content;
      break;
    }
  }
  return {echo, {estimate_prompt_tokens(request), estimate_tokens(echo)}, FinishReason::stop};
}

std::vector<Embedding> ScriptedClient::embed(std::span<const std::string> texts) {
  if (texts.empty()) throw Error("embed requires at least one text");
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(stub_embedding(t, embedding_dim_));
  return out;
}

std::size_t ScriptedClient::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

}  // namespace aqua::llm
