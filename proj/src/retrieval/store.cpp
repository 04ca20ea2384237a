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

#include "aqua/retrieval/store.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aqua/core/error.hpp"
#include "aqua/llm/embedding.hpp"

namespace aqua::retrieval {
namespace {

constexpr std::array<std::pair<SourceKind, std::string_view>, 5> kSourceKinds{{
    {SourceKind::wiki, "wiki"},
    {SourceKind::email, "email"},
    {SourceKind::chat, "chat"},
    {SourceKind::story, "story"},
    {SourceKind::adr, "adr"},
}};

constexpr std::size_t kEmbedBatch = 64;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(SourceKind kind) {
  for (const auto& [k, name] : kSourceKinds)
    if (k == kind) return name;
  return "wiki";
}

SourceKind parse_source_kind(std::string_view text) {
  for (const auto& [k, name] : kSourceKinds)
    if (name == text) return k;
  throw SchemaError("source_kind", "unknown source kind '" + std::string(text) + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(std::size_t length, const ChunkingConfig& chunking) {
  if (chunking.overlap_chars >= chunking.target_chars)
    throw ConfigError("chunk overlap must be smaller than the chunk target");
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t step = chunking.target_chars - chunking.overlap_chars;
  for (std::size_t start = 0; start < length; start += step) {
    const std::size_t end = std::min(start + chunking.target_chars, length);
    spans.emplace_back(start, end);
    if (end == length) break;
  }
  return spans;
}

Store index(std::vector<Document> documents, const ChunkingConfig& chunking, llm::ChatClient& embedder) {
  if (chunking.overlap_chars >= chunking.target_chars)
    throw ConfigError("chunk overlap must be smaller than the chunk target");
  if (documents.empty()) throw Error("cannot index an empty corpus");

  Store store;
  store.chunking_ = chunking;
  for (const auto& doc : documents) {
    if (doc.text.empty()) throw Error("document '" + doc.id + "' has no text");
    std::size_t ordinal = 0;
    for (const auto& [start, end] : chunk_spans(doc.text.size(), chunking)) {
      Chunk c;
      c.id = doc.id + "#" + std::to_string(ordinal++);
      c.document_id = doc.id;
      c.start = start;
      c.end = end;
      c.text = doc.text.substr(start, end - start);
      store.chunks_.push_back(std::move(c));
    }
  }

  for (std::size_t begin = 0; begin < store.chunks_.size(); begin += kEmbedBatch) {
    const std::size_t end = std::min(begin + kEmbedBatch, store.chunks_.size());
    std::vector<std::string> texts;
    for (std::size_t i = begin; i < end; ++i) texts.push_back(store.chunks_[i].text);
    auto vectors = embedder.embed(texts);
    if (vectors.size() != texts.size()) throw Error("embedder returned the wrong number of vectors");
    for (std::size_t i = begin; i < end; ++i) store.chunks_[i].vector = std::move(vectors[i - begin]);
  }
  store.documents_ = std::move(documents);
  return store;
}

ContextBundle retrieve(const Store& store, std::string_view query, std::size_t k, std::int64_t token_budget,
                       llm::ChatClient& embedder) {
  ContextBundle bundle;
  bundle.budget = token_budget;
  const auto& chunks = store.chunks();
  if (k == 0 || token_budget <= 0 || chunks.empty()) return bundle;

  const std::vector<std::string> q{std::string(query)};
  const auto qv = embedder.embed(q).at(0);
  std::vector<double> score(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) score[i] = llm::cosine_similarity(qv, chunks[i].vector);

  std::vector<std::size_t> order(chunks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(k, order.size()));

  for (std::size_t i : order) {
    const auto cost = llm::estimate_tokens(chunks[i].text);
    if (bundle.token_estimate + cost > token_budget) break;
    bundle.token_estimate += cost;
    bundle.chunks.push_back(chunks[i]);
  }
  return bundle;
}

std::vector<Document> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("corpus directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::vector<Document> docs;
  for (const auto& file : files) {
    Document doc;
    doc.id = file.stem().string();
    doc.text = read_file(file);
    const auto meta_path = file.parent_path() / (file.stem().string() + ".meta.json");
    if (std::filesystem::exists(meta_path)) {
      nlohmann::json meta;
      try {
        meta = nlohmann::json::parse(read_file(meta_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(meta_path.string(), e.what());
      }
      if (!meta.is_object()) throw SchemaError(meta_path.string(), "expected an object");
      for (const auto& [key, value] : meta.items()) {
        if (!value.is_string()) throw SchemaError(meta_path.string() + ":" + key, "expected a string");
        if (key == "id")
          doc.id = value.get<std::string>();
        else if (key == "source_kind")
          doc.source_kind = parse_source_kind(value.get<std::string>());
        else
          doc.metadata[key] = value.get<std::string>();
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace aqua::retrieval
