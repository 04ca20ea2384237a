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
#include <string_view>

#include "aqua/llm/client.hpp"

namespace aqua::llm {

inline constexpr std::size_t kDefaultEmbeddingDim = 256;

// Deterministic feature-hashing embedding: every lowercase word and word
// bigram seeds a pseudo-random +-1 expansion over `dim` coordinates; the sum
// is normalized to unit length. Texts sharing most words land close
// together, unrelated texts are near-orthogonal.
Embedding stub_embedding(std::string_view text, std::size_t dim = kDefaultEmbeddingDim);

void normalize(Embedding& v);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace aqua::llm
