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

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/llm/client.hpp"
#include "aqua/llm/embedding.hpp"

namespace aqua::llm {

struct TranscriptEntry {
  // "sha256:<hex>" of the request messages, or an exact request tag.
  std::string match;
  std::string response;
  Usage synthetic_usage;
};

struct ScriptedTranscript {
  enum class Mode {
    keyed,       // entries looked up by digest or tag
    sequential,  // entries replayed in order regardless of the request
  };

  Mode mode = Mode::keyed;
  std::vector<TranscriptEntry> entries;
  // Unmatched (keyed) or exhausted (sequential) requests are errors when
  // strict. Otherwise keyed mode echoes the last user message and sequential
  // mode repeats its last entry.
  bool strict = true;
};

// Throws SchemaError on malformed documents or duplicate match keys.
ScriptedTranscript transcript_from_json(const nlohmann::json& j);
ScriptedTranscript load_transcript(const std::filesystem::path& path);
nlohmann::json to_json(const ScriptedTranscript& transcript);

// Hermetic provider double: canned responses with explicit synthetic usage,
// deterministic embeddings.
class ScriptedClient final : public ChatClient {
 public:
  explicit ScriptedClient(ScriptedTranscript transcript, std::size_t embedding_dim = kDefaultEmbeddingDim);

  ChatResponse complete(const ChatRequest& request) override;
  std::vector<Embedding> embed(std::span<const std::string> texts) override;

  std::size_t calls() const;

 private:
  ScriptedTranscript transcript_;
  std::size_t embedding_dim_;
  mutable std::mutex mu_;
  std::size_t cursor_ = 0;
  std::size_t calls_ = 0;
};

}  // namespace aqua::llm
