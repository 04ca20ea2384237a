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

#include <algorithm>
#include <random>
#include <set>

#include "aqua/core/coverage.hpp"
#include "aqua/core/validation.hpp"
#include "aqua/generation/autocorrect.hpp"
#include "aqua/llm/scripted_client.hpp"
#include "aqua/retrieval/dedup.hpp"
#include "support/case_gen.hpp"
#include "support/doubles.hpp"

namespace aqua::generation {
namespace {

using testing::fenced;
using testing::LambdaClient;

const std::vector<std::string> kSixFormatItems{
    "1. Test case ID and title.",
    "2. Test data – data required to execute a test case. For example, login and password or customer age to fill in "
    "UI form to trigger some specific expected validation message.",
    "3. Preconditions – initial state of the system required to execute test case.",
    "4. Steps – an ordered action sequence the tester must perform to execute a test scenario. This executable "
    "sequence is called test scenario.",
    "5. Expected results – expected system state and behavior after performing test steps.",
    "6. Postconditions – optional set of steps required to revert system to blank state.",
};

TestCase login_case(const std::string& id, std::vector<std::string> refs = {"AC-1"}) {
  TestCase tc;
  tc.id = id;
  tc.title = "Successful login";
  tc.test_data = {{"username", "standard_user"}, {"password", "secret_sauce"}};
  tc.preconditions = {"Login page is open"};
  tc.steps = {
      {1, "Enter the username", Action{ActionKind::type_text, "user-name", "{{username}}"}},
      {2, "Enter the password", Action{ActionKind::type_text, "password", "{{password}}"}},
      {3, "Click the Login button", Action{ActionKind::click, "login-button", std::nullopt}},
  };
  tc.expected_results = {{"The user is redirected to the product list page",
                          Assertion{AssertionKind::url_matches, "", "/inventory\\.html", std::nullopt}}};
  tc.ac_refs = std::move(refs);
  tc.provenance = Provenance::generated();
  return tc;
}

retrieval::ContextBundle two_chunks() {
  retrieval::ContextBundle b;
  b.chunks.push_back({"doc#0", "doc", 0, 5, "first chunk text", {}});
  b.chunks.push_back({"doc#1", "doc", 5, 9, "second chunk text", {}});
  return b;
}

TEST(GenerationPrompt, EmptyContextKeepsFormatAndConstraint) {
  const auto story = testing::load_story("login");
  const auto prompt = assemble_generation_prompt(story, {});
  for (const auto& item : kSixFormatItems) EXPECT_NE(prompt.find(item), std::string::npos) << item;
  EXPECT_NE(prompt.find("test steps should cover only focal scenario and not preconditions"), std::string::npos);
  EXPECT_NE(prompt.find("<context>\n\n</context>"), std::string::npos);
  EXPECT_NE(prompt.find(story.title), std::string::npos);
  EXPECT_NE(prompt.find("User has a registered account."), std::string::npos);
  for (const auto& ac : story.acceptance_criteria) EXPECT_NE(prompt.find(ac.text), std::string::npos);
}

TEST(GenerationPrompt, ProductPreviewStoryIsInterpolated) {
  const auto prompt = assemble_generation_prompt(testing::load_story("product_preview"), {});
  EXPECT_NE(prompt.find("Each product in product list has a distinctive product picture"), std::string::npos);
  EXPECT_NE(prompt.find("As a user I want to see preview picture on product list to be able to select product."),
            std::string::npos);
}

TEST(GenerationPrompt, ContextChunksKeepOrder) {
  const auto prompt = assemble_generation_prompt(testing::load_story("login"), two_chunks());
  const auto a = prompt.find("first chunk text"), b = prompt.find("second chunk text");
  ASSERT_NE(a, std::string::npos);
  ASSERT_NE(b, std::string::npos);
  EXPECT_LT(a, b);
  EXPECT_GT(a, prompt.find("<context>"));
  EXPECT_LT(b, prompt.find("</context>"));
}

TEST(RenderTemplate, UnknownPlaceholderIsAnError) {
  EXPECT_EQ(render_template("a ${x} b", {{"x", "1"}}), "a 1 b");
  EXPECT_THROW(render_template("${nope}", {}), Error);
}

TEST(FencedBlocks, Extraction) {
  const auto blocks = extract_fenced_blocks("intro\n```json\n{\"a\":1}\n```\ntext\n  ```\nx\n```\n```\nopen");
  ASSERT_EQ(blocks.size(), 3u);
  EXPECT_EQ(blocks[0], "{\"a\":1}\n");
  EXPECT_EQ(blocks[1], "x\n");
  EXPECT_EQ(blocks[2], "open\n");
}

GenerationRequest request_for(const std::string& story) {
  GenerationRequest r;
  r.story = testing::load_story(story);
  r.model = "gen-model";
  return r;
}

TEST(GenerateCases, TwoWellFormedCases) {
  LambdaClient client([](const llm::ChatRequest&) {
    return llm::ChatResponse{fenced(login_case("TC-1")) + "\n" + fenced(login_case("TC-2", {"AC-2"})), {100, 50}, {}};
  });
  const auto suite = generate_cases(request_for("login"), client);
  EXPECT_EQ(suite.cases.size(), 2u);
  EXPECT_TRUE(suite.rejected_fragments.empty());
  EXPECT_EQ(suite.usage, (llm::Usage{100, 50}));
  EXPECT_EQ(client.requests.at(0).tag, "generate/US-LOGIN/1");
  EXPECT_DOUBLE_EQ(client.requests.at(0).temperature, 0.2);
}

TEST(GenerateCases, MalformedFragmentIsRejectedWithSection) {
  auto broken = to_json(login_case("TC-2"));
  broken.erase("expected_results");
  LambdaClient client([&](const llm::ChatRequest&) {
    return llm::ChatResponse{fenced(login_case("TC-1")) + "```json\n" + broken.dump() + "\n```\n", {1, 1}, {}};
  });
  const auto suite = generate_cases(request_for("login"), client);
  ASSERT_EQ(suite.cases.size(), 1u);
  ASSERT_EQ(suite.rejected_fragments.size(), 1u);
  EXPECT_NE(suite.rejected_fragments[0].issue.find("expected_results"), std::string::npos);
}

TEST(GenerateCases, DanglingCriterionAndDuplicateIdsAreRejected) {
  LambdaClient client([](const llm::ChatRequest&) {
    return llm::ChatResponse{fenced(login_case("TC-1")) + fenced(login_case("TC-1")) + fenced(login_case("TC-3", {"AC-9"})),
                             {}, {}};
  });
  const auto suite = generate_cases(request_for("login"), client);
  ASSERT_EQ(suite.cases.size(), 1u);
  ASSERT_EQ(suite.rejected_fragments.size(), 2u);
  EXPECT_NE(suite.rejected_fragments[0].issue.find("duplicate"), std::string::npos);
  EXPECT_NE(suite.rejected_fragments[1].issue.find("ac_refs"), std::string::npos);
}

TEST(GenerateCases, OneReAskThenSuccessOrFailure) {
  LambdaClient recovers([](const llm::ChatRequest& r) {
    if (r.tag.ends_with("/reask")) return llm::ChatResponse{fenced(login_case("TC-1")), {20, 10}, {}};
    return llm::ChatResponse{"Here are some test cases: 1. login works", {10, 5}, {}};
  });
  const auto suite = generate_cases(request_for("login"), recovers);
  EXPECT_EQ(suite.cases.size(), 1u);
  EXPECT_EQ(suite.usage, (llm::Usage{30, 15}));
  ASSERT_EQ(recovers.requests.size(), 2u);
  EXPECT_EQ(recovers.requests[1].messages.size(), 3u);

  LambdaClient hopeless([](const llm::ChatRequest&) { return llm::ChatResponse{"```json\nnot json\n```", {}, {}}; });
  EXPECT_THROW(generate_cases(request_for("login"), hopeless), GenerationError);
  EXPECT_EQ(hopeless.requests.size(), 2u);
}

TEST(GenerateCases, EveryEmittedCaseValidates) {
  std::mt19937_64 rng(8);
  const auto story = testing::load_story("sorting");
  std::bernoulli_distribution coin(0.5);
  for (int round = 0; round < 100; ++round) {
    std::string output;
    for (int i = 0; i < 5; ++i) {
      auto j = to_json(testing::random_case(rng, "TC-" + std::to_string(i), {"AC-" + std::to_string(1 + i % 4)}));
      switch (rng() % 5) {
        case 0: j.erase("steps"); break;
        case 1: j["steps"][0]["index"] = 7; break;
        case 2: j["ac_refs"].push_back("AC-99"); break;
        case 3: j["expected_results"] = nlohmann::json::array(); break;
        default: break;
      }
      output += coin(rng) ? "```json\n" + j.dump() + "\n```\n" : "```\n{ broken\n```\n";
    }
    LambdaClient client([&](const llm::ChatRequest&) { return llm::ChatResponse{output, {}, {}}; });
    try {
      const auto suite = generate_cases(request_for("sorting"), client);
      for (const auto& tc : suite.cases) ASSERT_TRUE(validate_test_case(tc, &story).valid);
    } catch (const GenerationError&) {
    }
  }
}

TEST(JudgeSuite, AllCoveredWithEchoJudge) {
  const auto story = testing::load_story("login");
  const std::vector<TestCase> cases{login_case("TC-1", {"AC-1"}), login_case("TC-2", {"AC-2", "AC-3"})};
  LambdaClient client([](const llm::ChatRequest& r) { return llm::ChatResponse{testing::echo_judge_reply(r), {5, 5}, {}}; });
  const auto report = judge_suite(cases, story, {}, client, "judge-model");
  EXPECT_TRUE(report.uncovered_ac.empty());
  EXPECT_TRUE(report.clean());
  EXPECT_EQ(report.usage, (llm::Usage{5, 5}));
  EXPECT_EQ(client.requests.at(0).tag, "judge/US-LOGIN/1");
  EXPECT_DOUBLE_EQ(client.requests.at(0).temperature, 0.0);
}

TEST(JudgeSuite, UncoveredCriterionIsComputedMechanically) {
  const auto story = testing::load_story("login");
  const std::vector<TestCase> cases{login_case("TC-1", {"AC-1"}), login_case("TC-2", {"AC-2"})};
  LambdaClient client([](const llm::ChatRequest& r) {
    auto reply = nlohmann::json::parse(generation::extract_fenced_blocks(testing::echo_judge_reply(r)).at(0));
    reply["uncovered_ac"] = nlohmann::json::array();  // ignored
    return llm::ChatResponse{reply.dump(), {}, {}};
  });
  const auto report = judge_suite(cases, story, {}, client, "judge-model");
  EXPECT_EQ(report.uncovered_ac, std::vector<std::string>{"AC-3"});
  EXPECT_FALSE(report.clean());
}

TEST(JudgeSuite, RestatedCriterionIsFlagged) {
  const auto story = testing::load_story("product_preview");
  auto tc = login_case("TC-1", {"AC-1"});
  tc.steps[2].instruction = "Check that each product in product list has a   distinctive product picture";
  const std::vector<TestCase> cases{tc};
  LambdaClient client([](const llm::ChatRequest& r) { return llm::ChatResponse{testing::echo_judge_reply(r), {}, {}}; });
  const auto report = judge_suite(cases, story, {}, client, "judge-model");
  ASSERT_EQ(report.cases.size(), 1u);
  EXPECT_FALSE(report.cases[0].valid);
  ASSERT_EQ(report.cases[0].issues.size(), 1u);
  EXPECT_NE(report.cases[0].issues[0].find("test case and acceptance criterion are confused"), std::string::npos);
}

TEST(JudgeSuite, ReAskOnceThenFail) {
  const auto story = testing::load_story("login");
  const std::vector<TestCase> cases{login_case("TC-1")};
  LambdaClient flaky([](const llm::ChatRequest& r) {
    if (r.tag.ends_with("/reask")) return llm::ChatResponse{testing::echo_judge_reply(r), {}, {}};
    return llm::ChatResponse{"looks fine to me", {}, {}};
  });
  EXPECT_NO_THROW(judge_suite(cases, story, {}, flaky, "j"));
  LambdaClient broken([](const llm::ChatRequest&) { return llm::ChatResponse{"{\"cases\": 3}", {}, {}}; });
  EXPECT_THROW(judge_suite(cases, story, {}, broken, "j"), JudgeError);
  EXPECT_EQ(broken.requests.size(), 2u);
}

TEST(JudgeReport, UncoveredIsSetDifferenceAndRefsClipped) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 200; ++round) {
    const auto story = testing::random_story(rng, 1 + rng() % 6);
    std::vector<TestCase> cases;
    nlohmann::json reply{{"cases", nlohmann::json::array()}};
    std::set<std::string> union_refs;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      cases.push_back(testing::random_case(rng, "TC-" + std::to_string(i)));
      std::vector<std::string> refs;
      for (int r = 0; r < 3; ++r) {
        const auto k = 1 + rng() % 8;
        refs.push_back("AC-" + std::to_string(k));
        if (k <= story.acceptance_criteria.size()) union_refs.insert(refs.back());
      }
      if (rng() % 4) reply["cases"].push_back({{"id", cases.back().id}, {"ac_refs_confirmed", refs}});
    }
    const auto report = finalize_judge_report(reply, cases, story);
    std::vector<std::string> expected;
    for (const auto& ac : story.acceptance_criteria)
      if (!union_refs.contains(ac.id)) expected.push_back(ac.id);
    // Skipped cases contribute nothing.
    std::set<std::string> confirmed;
    for (const auto& c : report.cases) {
      for (const auto& ref : c.ac_refs_confirmed) {
        ASSERT_LE(std::stoul(ref.substr(3)), story.acceptance_criteria.size());
        confirmed.insert(ref);
      }
    }
    std::vector<std::string> oracle;
    for (const auto& ac : story.acceptance_criteria)
      if (!confirmed.contains(ac.id)) oracle.push_back(ac.id);
    ASSERT_EQ(report.uncovered_ac, oracle);
    ASSERT_EQ(report.cases.size(), cases.size());
  }
}

TEST(JudgeReport, JsonRoundTrip) {
  JudgeReport r;
  r.cases = {{"TC-1", false, {"vague"}, {"AC-1"}}};
  r.uncovered_ac = {"AC-2"};
  r.overlap_pairs = {{"TC-1", "TC-2"}};
  r.format_violations = 2;
  r.notes = {"AC-2 is ambiguous"};
  r.usage = {3, 4};
  EXPECT_EQ(judge_report_from_json(to_json(r)), r);
}

// Generation answers by round; the judge finds AC-2 uncovered until round
// `clean_round`.
LambdaClient scripted_rounds(int clean_round) {
  return LambdaClient([clean_round](const llm::ChatRequest& r) {
    const int round = r.tag.back() - '0';
    if (r.tag.starts_with("generate/")) {
      std::string out = fenced(login_case("TC-1", {"AC-1", "AC-3"}));
      if (round >= clean_round) out += fenced(login_case("TC-2", {"AC-2"}));
      return llm::ChatResponse{out, {100, 40}, {}};
    }
    return llm::ChatResponse{testing::echo_judge_reply(r), {30, 10}, {}};
  });
}

TEST(AutocorrectLoop, SecondRoundCleanAfterFeedback) {
  auto client = scripted_rounds(2);
  AutocorrectionConfig cfg;
  cfg.judge_model = "judge-model";
  const auto suite = autocorrect_loop(request_for("login"), cfg, client);
  EXPECT_EQ(suite.iterations, 2);
  ASSERT_TRUE(suite.report);
  EXPECT_TRUE(suite.report->clean());
  EXPECT_EQ(suite.cases.size(), 2u);
  EXPECT_EQ(suite.usage, (llm::Usage{260, 100}));
  ASSERT_EQ(client.requests.size(), 4u);
  EXPECT_EQ(client.requests[2].tag, "generate/US-LOGIN/2");
  EXPECT_NE(client.requests[2].messages[0].content.find("\"uncovered_ac\": [\n    \"AC-2\""), std::string::npos);
  EXPECT_EQ(client.requests[1].model, "judge-model");
}

TEST(AutocorrectLoop, FirstSuiteCleanStopsImmediately) {
  auto client = scripted_rounds(1);
  const auto suite = autocorrect_loop(request_for("login"), {}, client);
  EXPECT_EQ(suite.iterations, 1);
  EXPECT_EQ(client.requests.size(), 2u);
}

TEST(AutocorrectLoop, IterationsBoundedByConfig) {
  for (int m = 1; m <= 4; ++m) {
    for (int clean = 1; clean <= 6; ++clean) {
      auto client = scripted_rounds(clean);
      AutocorrectionConfig cfg;
      cfg.max_iterations = m;
      const auto suite = autocorrect_loop(request_for("login"), cfg, client);
      EXPECT_EQ(suite.iterations, std::min(m, clean));
      ASSERT_TRUE(suite.report);
      EXPECT_EQ(suite.report->clean(), clean <= m);
    }
  }
  auto client = scripted_rounds(1);
  AutocorrectionConfig bad;
  bad.max_iterations = 0;
  EXPECT_THROW(autocorrect_loop(request_for("login"), bad, client), ConfigError);
}

TEST(Coverage, Examples) {
  const auto story = testing::load_story("login");
  const std::vector<TestCase> all{login_case("TC-1", {"AC-1"}), login_case("TC-2", {"AC-2", "AC-3"})};
  EXPECT_EQ(compute_coverage(story, all).percent_covered(), Rational(1));
  EXPECT_EQ(format_percent(compute_coverage(story, all).percent_covered()), "100.0%");
  EXPECT_EQ(compute_coverage(story, std::vector<TestCase>{}).percent_covered(), Rational(0));
  EXPECT_EQ(compute_coverage(story, std::vector<TestCase>{}).covering.size(), 3u);
}

TEST(Coverage, FourteenCriteriaElevenCovered) {
  UserStory story;
  story.id = "US-14";
  for (int i = 1; i <= 14; ++i) story.acceptance_criteria.push_back({"AC-" + std::to_string(i), "criterion"});
  std::vector<TestCase> cases;
  for (int i = 1; i <= 11; ++i) cases.push_back(login_case("TC-" + std::to_string(i), {"AC-" + std::to_string(i)}));
  const auto pct = compute_coverage(story, cases).percent_covered();
  EXPECT_EQ(pct, Rational(11, 14));
  EXPECT_EQ(format_fixed(pct * 100, 0), "79");
}

TEST(Coverage, InvariantUnderReorderingAndPruning) {
  std::mt19937_64 rng(31);
  llm::ScriptedClient embedder{llm::ScriptedTranscript{}};
  for (int round = 0; round < 50; ++round) {
    const auto story = testing::random_story(rng, 1 + rng() % 5);
    std::vector<TestCase> cases;
    for (int i = 0; i < 8; ++i) {
      auto tc = i % 3 == 2 ? cases.back() : testing::random_case(rng, "");
      tc.id = "TC-" + std::to_string(i);
      tc.ac_refs = {story.acceptance_criteria[rng() % story.acceptance_criteria.size()].id};
      cases.push_back(tc);
    }
    const auto pct = compute_coverage(story, cases).percent_covered();
    auto shuffled = cases;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ASSERT_EQ(compute_coverage(story, shuffled).percent_covered(), pct);
    const auto report = retrieval::prune_duplicates(cases, 0.92, story, embedder);
    ASSERT_EQ(compute_coverage(story, retrieval::retained_cases(cases, report)).percent_covered(), pct);
  }
}

}  // namespace
}  // namespace aqua::generation
