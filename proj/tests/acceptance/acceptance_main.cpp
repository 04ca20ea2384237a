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

// Prints one PASS/FAIL line per acceptance criterion. Exit 0 iff all pass.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "aqua/agent/guardrails.hpp"
#include "aqua/agent/planner.hpp"
#include "aqua/agent/policies.hpp"
#include "aqua/agent/runner.hpp"
#include "aqua/agent/verify.hpp"
#include "aqua/browser/sim.hpp"
#include "aqua/cli/app.hpp"
#include "aqua/core/coverage.hpp"
#include "aqua/llm/scripted_client.hpp"
#include "aqua/quality/metamorphic.hpp"
#include "aqua/quality/mutation.hpp"
#include "aqua/report/report.hpp"
#include "aqua/retrieval/dedup.hpp"
#include "support/case_gen.hpp"
#include "support/doubles.hpp"

namespace aqua {
namespace {

namespace fs = std::filesystem;
using agent::PolicyKind;
using agent::VerdictStatus;
using testing::LambdaClient;
using testing::load_flow;
using testing::resource;

// Failure detail; empty means the criterion held.
using Check = std::function<std::string()>;

browser::SimFixture fixture(const std::string& name) {
  return browser::load_sim_fixture(resource("fixtures/sim/" + name + ".json"));
}

agent::ExecutionRecord run_policy(const TestCase& tc, PolicyKind kind, const browser::SimFixture& f,
                                  std::uint64_t seed, const std::optional<MutationDiff>& diff = {}) {
  auto client = agent::make_policy_client(kind, diff);
  browser::SimSession session(f, seed);
  return agent::execute_flow(tc, session, *client);
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli::run_cli(args, out, err);
}

// Runs `body` inside a fresh working directory and restores the old one.
template <class F>
auto in_dir(const fs::path& dir, F body) {
  const auto previous = fs::current_path();
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::current_path(dir);
  struct Restore {
    fs::path p;
    ~Restore() { fs::current_path(p); }
  } restore{previous};
  return body();
}

std::string ac1_flakiness() {
  const std::vector<std::string> flows{"LOGIN", "LOGIN-MUT", "PRODUCTS", "SORTING", "SORTING-MUT", "CHECKOUT"};
  report::ReportInputs inputs;
  for (const auto& f : flows)
    for (const std::string m : {"small", "large"}) {
      int unexpected = 0;
      if (f == "SORTING-MUT") unexpected = m == "small" ? 1 : 2;
      if (f == "CHECKOUT" && m == "small") unexpected = 1;
      report::RunSet rs{f, m, VerdictStatus::passed, {}};
      for (int i = 0; i < 4; ++i) {
        agent::ExecutionRecord r;
        r.case_id = f;
        r.roles = {m, m};
        r.final_verdict.status = i < unexpected ? VerdictStatus::failed : VerdictStatus::passed;
        r.harness_verdict = r.final_verdict;
        rs.records.push_back(r);
      }
      inputs.run_sets.push_back(rs);
    }
  const auto rep = report::aggregate(inputs, {});
  std::vector<std::string> rates;
  for (const auto& row : rep.execution)
    if (row.flakiness.unexpected > 0) rates.push_back(format_percent(row.flakiness.rate));
  std::multiset<std::string> got(rates.begin(), rates.end());
  if (got != std::multiset<std::string>{"25.0%", "25.0%", "50.0%"}) return "flaky rows differ";
  if (rep.aggregate_flaky != Rational(4, 48)) return "aggregate is not 4/48";
  if (report::render_markdown(rep).find("Aggregate flaky rate: 8.3% (4/48)") == std::string::npos)
    return "aggregate not rendered as 8.3%";
  return "";
}

std::string ac2_mutation_soundness() {
  const auto store = fixture("store");
  int mutants = 0, caught = 0, corrected = 0, data = 0, data_corrected = 0;
  for (const std::string name : {"login", "login_negative", "sorting", "checkout"}) {
    const auto tc = load_flow(name);
    for (auto kind : {MutationKind::data_corruption, MutationKind::expectation_corruption,
                      MutationKind::step_corruption}) {
      for (std::uint64_t seed = 0; seed < 3; ++seed) {
        quality::MutantCase m;
        try {
          m = quality::mutate_case(tc, kind, seed);
        } catch (const quality::NoMutableFieldError&) {
          continue;
        }
        ++mutants;
        const auto honest = quality::audit_mutant(m, run_policy(m.mutant, PolicyKind::honest, store, seed, m.diff));
        caught += honest.caught;
        corrected += honest.mutation_corrected;
        if (kind == MutationKind::data_corruption) {
          ++data;
          const auto c = quality::audit_mutant(m, run_policy(m.mutant, PolicyKind::corrective, store, seed, m.diff));
          data_corrected += c.mutation_corrected;
        }
      }
    }
  }
  std::ostringstream why;
  if (mutants < 20) why << "only " << mutants << " mutants; ";
  if (caught != mutants) why << "honest caught " << caught << "/" << mutants << "; ";
  if (corrected != 0) why << "honest corrected " << corrected << "; ";
  if (data_corrected != data) why << "corrective flagged " << data_corrected << "/" << data << " data mutants; ";
  const int code = in_dir(fs::temp_directory_path() / ("aqua-accept-ac2-" + std::to_string(::getpid())), [] {
    fs::create_directories("cases");
    for (const std::string n : {"login", "sorting", "checkout"})
      fs::copy_file(resource("fixtures/flows/" + n + ".json"), "cases/" + n + ".json");
    if (cli({"mutate", "--cases", "cases", "--kinds", "data", "--out", "mut"}) != 0) return -1;
    return cli({"audit-mutants", "--mutants", "mut", "--agent", "corrective", "--report", "a.json"});
  });
  if (code != cli::kVerdictFailures) why << "corrective audit exit " << code;
  return why.str();
}

agent::TraceEvent event(int n, std::string digest, ActionKind kind, std::string target) {
  agent::TraceEvent e;
  e.step_number = n;
  e.observation_digest = std::move(digest);
  e.action = {kind, std::move(target), std::nullopt};
  return e;
}

Action random_action(std::mt19937_64& rng) {
  static const std::vector<std::string> targets{"user-name", "password", "login-button", "shopping-cart-link",
                                                "add-to-cart-backpack", "checkout", "first-name", "postal-code",
                                                "continue", "finish", "cancel", "nowhere"};
  const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const auto target = targets[pick(targets.size())];
  switch (pick(5)) {
    case 0: return {ActionKind::navigate, "", std::string(pick(2) ? "/inventory.html" : "/")};
    case 1: return {ActionKind::type_text, target, std::string(pick(2) ? "standard_user" : "secret_sauce")};
    case 2: return {ActionKind::go_back, "", std::nullopt};
    default: return {ActionKind::click, target, std::nullopt};
  }
}

std::string ac3_guardrails() {
  std::mt19937_64 rng(3);
  const auto tc = load_flow("checkout");
  auto f = fixture("store_popups");
  for (int trial = 0; trial < 500; ++trial) {
    agent::RunnerOptions o;
    o.guardrails.max_steps = std::uniform_int_distribution<int>(1, 30)(rng);
    o.guardrails.max_total_tokens = std::uniform_int_distribution<std::int64_t>(500, 60000)(rng);
    o.guardrails.max_wall_seconds = std::uniform_int_distribution<std::int64_t>(1, 20)(rng);
    o.max_output_tokens = std::uniform_int_distribution<int>(16, 600)(rng);
    auto local = rng();
    LambdaClient client([&](const llm::ChatRequest& req) {
      std::mt19937_64 r(local++);
      const auto roll = std::uniform_int_distribution<int>(0, 99)(r);
      std::string text = roll < 3 ? "{malformed"
                                  : agent::agent_reply_json({random_action(r), std::string(roll * 5, 't'), {}});
      const auto completion = std::uniform_int_distribution<std::int64_t>(1, 4000)(r);
      return llm::ChatResponse{text,
                               {llm::estimate_prompt_tokens(req), std::min<std::int64_t>(completion, req.max_output_tokens)},
                               llm::FinishReason::stop};
    });
    f.fault_plan.action_delay_min_ms = 0;
    f.fault_plan.action_delay_max_ms = std::uniform_int_distribution<int>(0, 3000)(rng);
    browser::SimSession session(f, rng());
    const auto rec = agent::execute_flow(tc, session, client, o);
    std::int64_t elapsed = 0;
    for (const auto& e : rec.events) elapsed += e.elapsed_ms;
    if (static_cast<int>(rec.events.size()) > o.guardrails.max_steps) return "step cap exceeded";
    if (rec.totals.total() > o.guardrails.max_total_tokens) return "token cap exceeded";
    if (elapsed > o.guardrails.max_wall_seconds * 1000) return "time cap exceeded";
    if (!rec.guardrail_trip && agent::check_guardrails(rec.events, o.guardrails)) return "untripped run holds a trip";
  }
  const agent::GuardrailConfig c;  // r = 3, k = 12
  for (int trial = 0; trial < 500; ++trial) {
    for (const int copies : {c.loop_repeat - 1, c.loop_repeat}) {
      std::vector<int> slots(static_cast<std::size_t>(c.loop_window), 0);
      for (int i = 0; i < copies; ++i) slots[static_cast<std::size_t>(i)] = 1;
      std::shuffle(slots.begin(), slots.end(), rng);
      std::vector<agent::TraceEvent> trace;
      int n = 0;
      const int prefix = std::uniform_int_distribution<int>(0, 10)(rng);
      for (int i = 0; i < prefix; ++i) trace.push_back(event(++n, "pre" + std::to_string(i), ActionKind::read, "p"));
      for (std::size_t i = 0; i < slots.size(); ++i)
        trace.push_back(slots[i] ? event(++n, "loop", ActionKind::click, "cart-icon")
                                 : event(++n, "u" + std::to_string(i), ActionKind::click, "z"));
      const auto trip = agent::check_guardrails(trace, c);
      const bool loop = trip && trip->reason == agent::GuardrailReason::reasoning_loop;
      if (copies == c.loop_repeat && !loop) return "r repeats did not trip reasoning_loop";
      if (copies < c.loop_repeat && trip) return "r-1 repeats tripped";
    }
  }
  return "";
}

std::string ac4_precedence() {
  const std::vector<VerdictStatus> all{VerdictStatus::passed, VerdictStatus::failed, VerdictStatus::inconclusive};
  for (auto a : all)
    for (auto h : all) {
      const agent::Verdict self{a, std::nullopt, "", agent::VerdictSource::agent_self_report};
      const agent::Verdict harness{h, std::nullopt, "", agent::VerdictSource::harness_checkpoints};
      const auto r = agent::resolve_verdicts(self, harness);
      if (!(r.final_verdict == harness)) return "final differs from harness";
      if (r.disagreement != (a != h)) return "disagreement flag wrong";
    }
  return "";
}

std::string ac5_fault_recovery() {
  const auto tc = load_flow("login");
  const auto f = fixture("store_popups");
  int naive = 0, react = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    naive += run_policy(tc, PolicyKind::naive, f, seed).final_verdict.status != VerdictStatus::passed;
    react += run_policy(tc, PolicyKind::honest, f, seed).final_verdict.status != VerdictStatus::passed;
  }
  const double fraction = naive / 200.0;
  std::ostringstream why;
  if (std::abs(fraction - 0.25) > 0.07) why << "naive failure fraction " << fraction << "; ";
  if (react != 0) why << "recovering executor failed " << react << " runs";
  return why.str();
}

std::string ac6_metamorphic() {
  using quality::MetamorphicRelation;
  using quality::OutputDomain;
  using quality::RelationKind;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto kind = static_cast<RelationKind>(std::uniform_int_distribution<int>(0, 2)(rng));
    const double y = std::uniform_int_distribution<int>(0, 20)(rng);
    const double yp = std::uniform_int_distribution<int>(0, 20)(rng);
    const double eps = kind == RelationKind::invariance ? std::uniform_int_distribution<int>(0, 3)(rng) : 0;
    bool expected = std::abs(y - yp) <= eps;
    if (kind == RelationKind::increase) expected = yp > y;
    if (kind == RelationKind::decrease) expected = yp < y;
    if (quality::evaluate_relation({kind, OutputDomain::numeric, eps, true}, y, yp).holds != expected)
      return "relation disagrees with direct predicate";
    const MetamorphicRelation inc{RelationKind::increase, OutputDomain::numeric, 0, true};
    const MetamorphicRelation dec{RelationKind::decrease, OutputDomain::numeric, 0, true};
    if (y != yp && quality::evaluate_relation(inc, y, yp).holds != quality::evaluate_relation(dec, yp, y).holds)
      return "increase/decrease duality broken";
  }
  const auto run = [](const std::string& file) {
    const auto suite = quality::load_metamorphic_suite(resource("fixtures/metamorphic/" + file));
    quality::CorpusFilterAdapter good(quality::load_corpus_records(*suite.corpus));
    quality::CorpusFilterAdapter buggy(quality::load_corpus_records(*suite.corpus), true);
    const auto table = quality::SynonymTable::load(*suite.synonyms);
    return quality::run_metamorphic_suite({{"corpus_filter", &good}, {"corpus_filter_buggy", &buggy}}, suite.cases,
                                          table);
  };
  const auto good = run("corpus_filter_suite.json");
  if (good.violations != 0 || good.inconclusive != 0) return "correct adapter violates";
  if (run("corpus_filter_buggy_suite.json").violations < 1) return "buggy adapter passes";
  return "";
}

std::string ac7_dedup() {
  static llm::ScriptedClient embedder{llm::ScriptedTranscript{}};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto story = testing::random_story(rng, 1 + trial % 6);
    std::uniform_int_distribution<std::size_t> ac(0, story.acceptance_criteria.size() - 1);
    std::bernoulli_distribution coin(0.5);
    std::vector<TestCase> cases;
    int id = 0;
    const int templates = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int t = 0; t < templates; ++t) {
      const auto base = testing::random_case(rng, "x");
      const int copies = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int i = 0; i < copies; ++i) {
        auto tc = base;
        tc.id = "TC-" + std::to_string(++id);
        tc.ac_refs = {story.acceptance_criteria[ac(rng)].id};
        if (coin(rng)) tc.steps.back().instruction += " now";
        cases.push_back(std::move(tc));
      }
    }
    std::shuffle(cases.begin(), cases.end(), rng);
    const double theta = retrieval::kDefaultDuplicateThreshold;
    const auto rep = retrieval::prune_duplicates(cases, theta, story, embedder);
    const auto survivors = retrieval::retained_cases(cases, rep);
    const auto covered = compute_coverage(story, survivors).covered_ids();
    if (covered != compute_coverage(story, cases).covered_ids()) return "coverage changed by pruning";
    for (const auto& pair : retrieval::prune_duplicates(survivors, theta, story, embedder).candidate_pairs) {
      std::vector<TestCase> without;
      for (const auto& tc : survivors)
        if (tc.id != pair.second) without.push_back(tc);
      if (compute_coverage(story, without).covered_ids() == covered) return "unprotected similar pair survived";
    }
  }
  return "";
}

std::string ac8_determinism() {
  const auto pipeline = [](const std::string& tag) {
    return in_dir(fs::temp_directory_path() / ("aqua-accept-ac8-" + std::to_string(::getpid())) / tag, [] {
      const auto r = resource("fixtures").string();
      std::string reports;
      const std::vector<std::vector<std::string>> steps{
          {"generate", "--stories", r + "/stories", "--context", r + "/context", "--out", "out/gen", "--judge"},
          {"judge", "--stories", r + "/stories", "--cases", "out/gen/cases", "--context", r + "/context", "--report",
           "out/judge.json"},
          {"run", "--cases", "out/gen/cases", "--repeat", "2", "--report", "out/run.report.json"},
          {"mutate", "--cases", "out/gen/cases", "--seed", "7", "--out", "out/mutants"},
          {"audit-mutants", "--mutants", "out/mutants", "--report", "out/audit/mutation.audit.json"}};
      for (const auto& s : steps)
        if (cli(s) != 0) return std::string("step failed: ") + s[0];
      std::ostringstream out, err;
      if (cli::run_cli({"report", "--in", "out"}, out, err) != 0) return std::string("report failed");
      for (const auto* f : {"out/gen/generation.report.json", "out/judge.json", "out/run.report.json",
                            "out/audit/mutation.audit.json"})
        reports += read_file(f);
      return reports + out.str();
    });
  };
  const auto a = pipeline("a");
  const auto b = pipeline("b");
  fs::remove_all(fs::temp_directory_path() / ("aqua-accept-ac8-" + std::to_string(::getpid())));
  if (a.starts_with("step failed") || a == "report failed") return a;
  return a == b ? "" : "reports differ between runs";
}

}  // namespace
}  // namespace aqua

int main() {
  ::unsetenv("OPENAI_API_KEY");
  const std::vector<std::pair<std::string, aqua::Check>> criteria{
      {"AC1 flakiness arithmetic", aqua::ac1_flakiness},
      {"AC2 mutation-audit soundness", aqua::ac2_mutation_soundness},
      {"AC3 guardrail safety", aqua::ac3_guardrails},
      {"AC4 verdict precedence", aqua::ac4_precedence},
      {"AC5 fault-injection recovery", aqua::ac5_fault_recovery},
      {"AC6 metamorphic oracle equivalence", aqua::ac6_metamorphic},
      {"AC7 dedup coverage preservation", aqua::ac7_dedup},
      {"AC8 determinism", aqua::ac8_determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    try {
      detail = check();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    failures += !detail.empty();
    std::cout << (detail.empty() ? "PASS " : "FAIL ") << name << " (" << ms << " ms)"
              << (detail.empty() ? "" : ": " + detail) << "\n";
  }
  std::cout << "NOT REPRODUCIBLE AC9 hosted-model quality, timing and price figures (live-only, see README)\n";
  return failures == 0 ? 0 : 1;
}
