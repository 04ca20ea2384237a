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

#include "aqua/llm/embedding.hpp"

#include <cctype>
#include <cmath>

#include "aqua/core/error.hpp"
#include "aqua/util/digest.hpp"

namespace aqua::llm {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void accumulate(Embedding& v, std::string_view feature) {
  std::uint64_t state = fnv1a64(feature);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i % 64 == 0) bits = splitmix64(state);
    v[i] += (bits >> (i % 64)) & 1U ? 1.0 : -1.0;
  }
}

}  // namespace

void normalize(Embedding& v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0) {
    // Text without word characters still gets a deterministic direction.
    accumulate(v, "\x01empty");
    normalize(v);
    return;
  }
  for (double& x : v) x /= norm;
}

Embedding stub_embedding(std::string_view text, std::size_t dim) {
  Embedding v(dim, 0.0);
  std::vector<std::string> words;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));

  for (std::size_t i = 0; i < words.size(); ++i) {
    accumulate(v, words[i]);
    if (i + 1 < words.size()) accumulate(v, words[i] + " " + words[i + 1]);
  }
  normalize(v);
  return v;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  if (dot > 1.0) return 1.0;
  if (dot < -1.0) return -1.0;
  return dot;
}

}  // namespace aqua::llm
