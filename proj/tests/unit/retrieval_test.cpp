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

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "aqua/core/coverage.hpp"
#include "aqua/core/error.hpp"
#include "aqua/llm/embedding.hpp"
#include "aqua/llm/scripted_client.hpp"
#include "aqua/retrieval/dedup.hpp"
#include "aqua/retrieval/store.hpp"
#include "support/case_gen.hpp"

namespace aqua::retrieval {
namespace {

const std::filesystem::path kContextDir = std::filesystem::path(AQUA_RESOURCE_DIR) / "fixtures/context";

llm::ScriptedClient& stub() {
  static llm::ScriptedClient client{llm::ScriptedTranscript{}};
  return client;
}

std::string filler(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + i % 26));
  return s;
}

TEST(Chunking, ThousandCharsAtFourHundredWithFiftyOverlap) {
  const auto spans = chunk_spans(1000, {400, 50});
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0], std::make_pair(std::size_t{0}, std::size_t{400}));
  EXPECT_EQ(spans[1], std::make_pair(std::size_t{350}, std::size_t{750}));
  EXPECT_EQ(spans[2], std::make_pair(std::size_t{700}, std::size_t{1000}));
}

TEST(Chunking, CoverageAndOverlapPropertyAgainstClosedForm) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len(1, 5000), target(2, 900);
  for (int i = 0; i < 500; ++i) {
    const std::size_t L = len(rng), t = target(rng);
    const std::size_t o = std::uniform_int_distribution<std::size_t>(0, t - 1)(rng);
    const auto spans = chunk_spans(L, {t, o});
    // Independent count: one window, plus ceil((L - t) / (t - o)) more when L > t.
    const std::size_t expected = L <= t ? 1 : 1 + (L - t + (t - o) - 1) / (t - o);
    ASSERT_EQ(spans.size(), expected) << L << " " << t << " " << o;
    ASSERT_EQ(spans.front().first, 0u);
    ASSERT_EQ(spans.back().second, L);
    for (std::size_t j = 0; j + 1 < spans.size(); ++j) {
      ASSERT_EQ(spans[j].second - spans[j + 1].first, o);
      ASSERT_LE(spans[j].second - spans[j].first, t);
    }
  }
}

TEST(Index, ShortDocumentIsOneChunkAndVectorsAreUnitNorm) {
  const auto store = index({{"d", SourceKind::wiki, "short text", {}}}, {400, 50}, stub());
  ASSERT_EQ(store.chunks().size(), 1u);
  EXPECT_EQ(store.chunks()[0].text, "short text");
  EXPECT_EQ(store.chunks()[0].id, "d#0");
  double n = 0;
  for (double x : store.chunks()[0].vector) n += x * x;
  EXPECT_NEAR(n, 1.0, 1e-9);
}

TEST(Index, RejectsBadConfigurationAndEmptyCorpus) {
  EXPECT_THROW(index({{"d", SourceKind::wiki, "x", {}}}, {50, 50}, stub()), ConfigError);
  EXPECT_THROW(index({{"d", SourceKind::wiki, "x", {}}}, {50, 80}, stub()), ConfigError);
  EXPECT_THROW(index({}, {400, 50}, stub()), Error);
}

TEST(Index, ChunksReassembleDocument) {
  const auto text = filler(1000);
  const auto store = index({{"d", SourceKind::wiki, text, {}}}, {400, 50}, stub());
  ASSERT_EQ(store.chunks().size(), 3u);
  std::string rebuilt;
  for (const auto& c : store.chunks()) {
    EXPECT_EQ(c.text, text.substr(c.start, c.end - c.start));
    rebuilt += c.text.substr(rebuilt.size() - c.start);
  }
  EXPECT_EQ(rebuilt, text);
}

TEST(Corpus, LoadsTextFilesWithSidecarMetadata) {
  const auto docs = load_corpus(kContextDir);
  ASSERT_EQ(docs.size(), 10u);
  std::set<std::string> ids;
  for (const auto& d : docs) ids.insert(d.id);
  EXPECT_TRUE(ids.contains("wiki-login"));
  EXPECT_TRUE(ids.contains("search-wiki"));  // no sidecar: file stem
  for (const auto& d : docs) {
    if (d.id == "adr-007-sorting") EXPECT_EQ(d.source_kind, SourceKind::adr);
    if (d.id == "wiki-login") EXPECT_EQ(d.metadata.at("owner"), "web team");
  }
  EXPECT_THROW(load_corpus(kContextDir / "missing"), ConfigError);
}

TEST(Retrieve, IdenticalQueryRanksChunkFirst) {
  const auto store = index(load_corpus(kContextDir), {300, 40}, stub());
  for (const auto& chunk : store.chunks()) {
    const auto bundle = retrieve(store, chunk.text, 3, 100000, stub());
    ASSERT_FALSE(bundle.chunks.empty());
    ASSERT_NEAR(llm::cosine_similarity(bundle.chunks[0].vector, chunk.vector), 1.0, 1e-9) << chunk.id;
  }
}

TEST(Retrieve, ZeroBudgetGivesEmptyBundle) {
  const auto store = index(load_corpus(kContextDir), {300, 40}, stub());
  const auto bundle = retrieve(store, "checkout postal code", 4, 0, stub());
  EXPECT_TRUE(bundle.chunks.empty());
  EXPECT_EQ(bundle.token_estimate, 0);
}

TEST(Retrieve, DeterministicTopFourOverTenDocuments) {
  const auto store = index(load_corpus(kContextDir), {300, 40}, stub());
  const auto first = retrieve(store, "sort the product list by price high to low", 4, 100000, stub());
  ASSERT_EQ(first.chunks.size(), 4u);
  for (int i = 0; i < 50; ++i) {
    const auto again = retrieve(store, "sort the product list by price high to low", 4, 100000, stub());
    ASSERT_EQ(again.chunks.size(), 4u);
    for (std::size_t j = 0; j < 4; ++j) ASSERT_EQ(again.chunks[j].id, first.chunks[j].id);
  }
  EXPECT_EQ(first.chunks[0].document_id, "adr-007-sorting");
}

TEST(Retrieve, BundleNeverExceedsBudget) {
  const auto store = index(load_corpus(kContextDir), {200, 30}, stub());
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> budget(-5, 400);
  std::uniform_int_distribution<std::size_t> k(0, 12);
  for (int i = 0; i < 300; ++i) {
    const auto b = budget(rng);
    const auto bundle = retrieve(store, testing::random_sentence(rng, 5), k(rng), b, stub());
    std::int64_t sum = 0;
    for (const auto& c : bundle.chunks) sum += llm::estimate_tokens(c.text);
    ASSERT_EQ(sum, bundle.token_estimate);
    ASSERT_LE(bundle.token_estimate, std::max<std::int64_t>(b, 0));
    ASSERT_EQ(bundle.budget, b);
  }
}

TEST(Cosine, Bounds) {
  const auto v = llm::stub_embedding("some text");
  auto neg = v;
  for (auto& x : neg) x = -x;
  EXPECT_NEAR(llm::cosine_similarity(v, v), 1.0, 1e-9);
  EXPECT_NEAR(llm::cosine_similarity(v, neg), -1.0, 1e-9);
  std::vector<double> e1(8, 0.0), e2(8, 0.0);
  e1[0] = 1;
  e2[3] = 1;
  EXPECT_EQ(llm::cosine_similarity(e1, e2), 0.0);
  EXPECT_THROW(llm::cosine_similarity(e1, v), Error);
}

UserStory story_with(std::size_t acs) {
  std::mt19937_64 rng(1);
  return testing::random_story(rng, acs);
}

TEST(Prune, IdenticalCaseIsPruned) {
  std::mt19937_64 rng(2);
  const auto story = story_with(3);
  auto a = testing::random_case(rng, "TC-1", {"AC-1"});
  auto b = a;
  b.id = "TC-2";
  const std::vector<TestCase> cases{a, b};
  const auto report = prune_duplicates(cases, kDefaultDuplicateThreshold, story, stub());
  EXPECT_EQ(report.pruned, std::vector<std::string>{"TC-2"});
  EXPECT_EQ(report.retained, std::vector<std::string>{"TC-1"});
  ASSERT_EQ(report.candidate_pairs.size(), 1u);
  EXPECT_NEAR(report.candidate_pairs[0].similarity, 1.0, 1e-9);
}

TEST(Prune, CoverageGuardProtectsUniqueCriterion) {
  std::mt19937_64 rng(3);
  const auto story = story_with(7);
  auto a = testing::random_case(rng, "TC-1", {"AC-1"});
  auto b = a;
  b.id = "TC-2";
  b.ac_refs = {"AC-1", "AC-7"};
  const std::vector<TestCase> cases{a, b};
  const auto before = compute_coverage(story, cases).covered_ids();
  const auto report = prune_duplicates(cases, kDefaultDuplicateThreshold, story, stub());
  EXPECT_TRUE(report.pruned.empty());
  EXPECT_EQ(report.candidate_pairs.size(), 1u);
  EXPECT_EQ(compute_coverage(story, retained_cases(cases, report)).covered_ids(), before);
}

TEST(Prune, DistinctRandomCasesSurviveHighThreshold) {
  std::mt19937_64 rng(4);
  const auto story = story_with(4);
  std::vector<TestCase> cases;
  for (int i = 0; i < 20; ++i) cases.push_back(testing::random_case(rng, "TC-" + std::to_string(i), {"AC-1"}));
  const auto report = prune_duplicates(cases, 0.99, story, stub());
  EXPECT_TRUE(report.pruned.empty());
  EXPECT_EQ(report.retained.size(), 20u);
}

// Random suites built from a few templates, with reworded and exact copies.
std::vector<TestCase> random_suite(std::mt19937_64& rng, const UserStory& story) {
  std::uniform_int_distribution<int> n_templates(1, 5), copies(1, 4);
  std::uniform_int_distribution<std::size_t> ac(0, story.acceptance_criteria.size() - 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<TestCase> out;
  int id = 0;
  const int templates = n_templates(rng);
  for (int t = 0; t < templates; ++t) {
    const auto base = testing::random_case(rng, "x");
    const int c = copies(rng);
    for (int i = 0; i < c; ++i) {
      auto tc = base;
      tc.id = "TC-" + std::to_string(++id);
      tc.ac_refs = {story.acceptance_criteria[ac(rng)].id};
      if (coin(rng)) tc.ac_refs.push_back(story.acceptance_criteria[ac(rng)].id);
      if (coin(rng)) tc.steps.back().instruction += " now";
      out.push_back(std::move(tc));
    }
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

TEST(Prune, CoveragePreservedIdempotentAndDeterministic) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    const auto story = story_with(1 + round % 6);
    const auto cases = random_suite(rng, story);
    const double theta = round % 2 ? kDefaultDuplicateThreshold : 0.8;
    const auto report = prune_duplicates(cases, theta, story, stub());

    std::set<std::string> all, pruned(report.pruned.begin(), report.pruned.end()),
        kept(report.retained.begin(), report.retained.end());
    for (const auto& tc : cases) all.insert(tc.id);
    ASSERT_EQ(pruned.size() + kept.size(), all.size());
    for (const auto& id : pruned) ASSERT_FALSE(kept.contains(id));

    const auto survivors = retained_cases(cases, report);
    ASSERT_EQ(compute_coverage(story, survivors).covered_ids(), compute_coverage(story, cases).covered_ids());

    const auto again = prune_duplicates(survivors, theta, story, stub());
    ASSERT_TRUE(again.pruned.empty());
    ASSERT_EQ(again.retained, report.retained);
    ASSERT_EQ(prune_duplicates(cases, theta, story, stub()), report);

    // Any similar retained pair is protected: dropping the later one loses coverage.
    for (const auto& pair : again.candidate_pairs) {
      std::vector<TestCase> without;
      for (const auto& tc : survivors)
        if (tc.id != pair.second) without.push_back(tc);
      ASSERT_NE(compute_coverage(story, without).covered_ids(), compute_coverage(story, survivors).covered_ids());
    }
  }
}

}  // namespace
}  // namespace aqua::retrieval
