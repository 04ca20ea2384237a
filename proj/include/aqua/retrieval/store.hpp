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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aqua/llm/client.hpp"

namespace aqua::retrieval {

enum class SourceKind { wiki, email, chat, story, adr };

std::string_view to_string(SourceKind kind);
SourceKind parse_source_kind(std::string_view text);

struct Document {
  std::string id;
  SourceKind source_kind = SourceKind::wiki;
  std::string text;
  std::map<std::string, std::string> metadata;
};

struct Chunk {
  std::string id;  // "<document id>#<ordinal>"
  std::string document_id;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;
  llm::Embedding vector;
};

struct ChunkingConfig {
  std::size_t target_chars = 800;
  std::size_t overlap_chars = 100;
};

struct ContextBundle {
  std::vector<Chunk> chunks;
  std::int64_t token_estimate = 0;
  std::int64_t budget = 0;
};

// Character spans produced by the chunking rule: windows of target_chars
// starting every target_chars - overlap_chars, the last one ending at the
// document end.
std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(std::size_t length, const ChunkingConfig& chunking);

class Store {
 public:
  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
  const ChunkingConfig& chunking() const noexcept { return chunking_; }

 private:
  friend Store index(std::vector<Document>, const ChunkingConfig&, llm::ChatClient&);
  std::vector<Document> documents_;
  std::vector<Chunk> chunks_;
  ChunkingConfig chunking_;
};

// Throws ConfigError when overlap >= target and Error on an empty corpus or a
// document with empty text.
Store index(std::vector<Document> documents, const ChunkingConfig& chunking, llm::ChatClient& embedder);

// Top-k chunks by cosine similarity to the query, admitted in similarity
// order until the next one would overflow the budget. Ties keep store order.
ContextBundle retrieve(const Store& store, std::string_view query, std::size_t k, std::int64_t token_budget,
                       llm::ChatClient& embedder);

// Reads every *.txt file of `dir` (sorted by name). An optional sidecar
// `<stem>.meta.json` supplies "id", "source_kind" and further string metadata.
std::vector<Document> load_corpus(const std::filesystem::path& dir);

}  // namespace aqua::retrieval
