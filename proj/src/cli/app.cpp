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

#include "aqua/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "aqua/agent/policies.hpp"
#include "aqua/agent/runner.hpp"
#include "aqua/browser/sim.hpp"
#include "aqua/browser/webdriver.hpp"
#include "aqua/cli/config.hpp"
#include "aqua/core/test_case_io.hpp"
#include "aqua/generation/autocorrect.hpp"
#include "aqua/generation/generator.hpp"
#include "aqua/llm/http_client.hpp"
#include "aqua/llm/scripted_client.hpp"
#include "aqua/quality/metamorphic.hpp"
#include "aqua/quality/mutation.hpp"
#include "aqua/report/report.hpp"
#include "aqua/retrieval/dedup.hpp"

namespace aqua::cli {
namespace {

using nlohmann::json;

constexpr std::string_view kGenerationSchema = "aqua.generation/1";
constexpr std::string_view kJudgeSchema = "aqua.judge/1";
constexpr std::string_view kAuditSchema = "aqua.mutation_audit/1";

// Bad flags, unreadable inputs and unresolvable targets.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::optional<std::string> env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

bool has_credentials(const Config& cfg) { return env(cfg.provider.http.credential_env_var).has_value(); }

std::shared_ptr<llm::ChatClient> http_client(const Config& cfg) {
  if (!has_credentials(cfg))
    throw UsageError("live provider needs credentials in $" + cfg.provider.http.credential_env_var);
  return std::make_shared<llm::HttpChatClient>(cfg.provider.http, net::make_http_transport());
}

std::shared_ptr<llm::ChatClient> language_model(const Config& cfg) {
  if (cfg.provider.kind == "http" || (cfg.provider.kind == "auto" && has_credentials(cfg))) return http_client(cfg);
  return std::make_shared<llm::ScriptedClient>(llm::load_transcript(cfg.provider.transcript));
}

generation::PromptTemplates templates(const Config& cfg) {
  return cfg.prompts_dir ? generation::load_prompt_templates(*cfg.prompts_dir) : generation::PromptTemplates::defaults();
}

fs::path output_root(const Config& cfg) { return cfg.output_dir.value_or(fs::path("aqua-out")); }

std::string path_token(std::string s) {
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_' && c != '+' && c != '~') c = '_';
  return s;
}

bool is_markdown(const fs::path& p) { return p.extension() == ".md"; }

std::vector<fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Every case file under `dir`, subdirectories included.
std::vector<TestCase> load_cases(const fs::path& dir) {
  std::vector<TestCase> out;
  for (const auto& p : json_files(dir)) out.push_back(load_test_case(p));
  if (out.empty()) throw UsageError("no test cases under " + dir.string());
  return out;
}

// Runs fn(i) for i in [0, n) on at most `workers` threads.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---- execution plumbing shared by run and audit-mutants ----

struct Target {
  bool sim = true;
  browser::SimFixture fixture;
  browser::WebDriverConfig webdriver;
};

Target resolve_target(const Config& cfg, const std::string& target) {
  Target t;
  if (target == "sim") {
    t.fixture = browser::load_sim_fixture(cfg.execution.sim_fixture);
    return t;
  }
  if (!target.starts_with("http://") && !target.starts_with("https://"))
    throw UsageError("--target must be sim or an http(s) URL, got '" + target + "'");
  t.sim = false;
  t.webdriver = cfg.execution.webdriver;
  t.webdriver.base_url = target;
  return t;
}

struct AgentFactory {
  std::string kind;  // llm, honest, naive, corrective or transcript
  std::optional<fs::path> transcript;
  std::shared_ptr<llm::ChatClient> shared;

  std::unique_ptr<llm::ChatClient> owned(const TestCase& tc) const {
    if (transcript) return std::make_unique<llm::ScriptedClient>(llm::load_transcript(*transcript));
    std::optional<MutationDiff> diff;
    if (tc.provenance.kind == ProvenanceKind::mutant) diff = tc.provenance.diff;
    return agent::make_policy_client(*agent::parse_policy_kind(kind), diff);
  }
};

AgentFactory resolve_agent(const Config& cfg, const std::optional<std::string>& flag, const Target& target) {
  AgentFactory f;
  f.kind = pick(flag, std::optional<std::string>(cfg.execution.agent), std::string("auto"));
  if (f.kind == "auto") f.kind = has_credentials(cfg) ? "llm" : "honest";
  if (f.kind != "llm" && !agent::parse_policy_kind(f.kind)) throw UsageError("unknown agent '" + f.kind + "'");
  if (!target.sim && f.kind != "llm") throw UsageError("a live target needs the llm agent and provider credentials");
  if (f.kind == "llm") {
    f.shared = http_client(cfg);
  } else if (cfg.execution.agent_transcript) {
    f.kind = "transcript";
    f.transcript = cfg.execution.agent_transcript;
  }
  return f;
}

struct Job {
  const TestCase* tc = nullptr;
  agent::ModelRoles roles;
  int repetition = 0;
};

agent::ExecutionRecord execute(const Job& job, const Config& cfg, const Target& target, const AgentFactory& agents,
                               const generation::PromptTemplates& prompts) {
  agent::RunnerOptions options;
  options.guardrails = cfg.guardrails;
  options.roles = job.roles;
  options.templates = prompts;
  options.hermetic = target.sim;
  options.tag = "run/" + job.tc->id + "/" + std::to_string(job.repetition);
  std::unique_ptr<llm::ChatClient> owned;
  llm::ChatClient* client = agents.shared.get();
  if (!client) {
    owned = agents.owned(*job.tc);
    client = owned.get();
  }
  if (target.sim) {
    browser::SimSession session(target.fixture, cfg.seed.value_or(0) + static_cast<std::uint64_t>(job.repetition));
    return agent::execute_flow(*job.tc, session, *client, options);
  }
  browser::WebDriverSession session(target.webdriver, net::make_http_transport());
  auto record = agent::execute_flow(*job.tc, session, *client, options);
  session.close();
  return record;
}

// Writes records and traces beside the report; returns trace paths relative
// to that directory.
std::vector<std::string> write_records(const fs::path& dir, const std::vector<Job>& jobs,
                                       const std::vector<agent::ExecutionRecord>& records) {
  std::vector<std::string> traces;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto stem = fs::path(path_token(jobs[i].tc->id)) / path_token(report::model_key(jobs[i].roles)) /
                      ("run-" + std::to_string(jobs[i].repetition));
    write_file(dir / "records" / (stem.string() + ".record.json"), agent::to_json(records[i]).dump(2) + "\n");
    const auto trace = fs::path("traces") / (stem.string() + ".trace.jsonl");
    write_file(dir / trace, agent::trace_jsonl(records[i]));
    traces.push_back(trace.generic_string());
  }
  return traces;
}

void write_report(const fs::path& file, const report::SuiteReport& r) {
  write_file(file, is_markdown(file) ? report::render_markdown(r) : report::render_machine(r));
}

int merge(int a, int b) { return std::max(a, b); }

// ---- commands ----

struct GenerateFlags {
  std::string stories;
  std::optional<std::string> out, context;
  bool judge = false;
  std::optional<int> max_iter;
};

int cmd_generate(const Config& cfg, const GenerateFlags& f, std::ostream& out, std::ostream& err) {
  std::vector<UserStory> stories;
  try {
    stories = load_user_stories(f.stories);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (stories.empty()) throw UsageError("no stories in " + f.stories);
  const auto out_dir = pick<fs::path>(f.out ? std::optional<fs::path>(*f.out) : std::nullopt, cfg.output_dir,
                                      fs::path("aqua-out"));
  const auto context_dir = f.context ? std::optional<fs::path>(*f.context) : cfg.retrieval.context_dir;
  const int max_iter = pick(f.max_iter, cfg.max_iter, 3);
  if (max_iter < 1) throw UsageError("--max-iter must be at least 1");

  auto client = language_model(cfg);
  const auto prompts = templates(cfg);
  std::optional<retrieval::Store> store;
  if (context_dir) {
    try {
      store = retrieval::index(retrieval::load_corpus(*context_dir), cfg.retrieval.chunking, *client);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw UsageError(std::string("context: ") + e.what());
    }
  }

  struct Outcome {
    generation::GeneratedSuite suite;
    retrieval::DuplicateReport dedup;
    std::optional<std::string> error;
  };
  std::vector<Outcome> outcomes(stories.size());
  parallel_for(stories.size(), cfg.concurrency, [&](std::size_t i) {
    const auto& story = stories[i];
    generation::GenerationRequest request;
    request.story = story;
    request.model = cfg.models.generator;
    if (store) {
      std::string query = story.title + "\n" + story.description;
      for (const auto& ac : story.acceptance_criteria) query += "\n" + ac.text;
      request.context = retrieval::retrieve(*store, query, cfg.retrieval.k, cfg.retrieval.token_budget, *client);
    }
    try {
      if (f.judge) {
        generation::AutocorrectionConfig ac{max_iter, cfg.models.judge, 0.0};
        outcomes[i].suite = generation::autocorrect_loop(request, ac, *client, prompts);
      } else {
        outcomes[i].suite = generation::generate_cases(request, *client, prompts);
      }
    } catch (const generation::GenerationError& e) {
      outcomes[i].error = e.what();
      return;
    } catch (const generation::JudgeError& e) {
      outcomes[i].error = e.what();
      return;
    }
    auto& suite = outcomes[i].suite;
    outcomes[i].dedup = retrieval::prune_duplicates(suite.cases, cfg.retrieval.theta, story, *client);
    suite.cases = retrieval::retained_cases(suite.cases, outcomes[i].dedup);
  });

  int code = kSuccess;
  json stories_json = json::array();
  report::ReportInputs inputs;
  for (std::size_t i = 0; i < stories.size(); ++i) {
    const auto& story = stories[i];
    const auto& o = outcomes[i];
    json entry = {{"story_id", story.id}};
    if (o.error || o.suite.cases.empty()) {
      code = merge(code, kVerdictFailures);
      entry["error"] = o.error.value_or("no test cases");
      err << story.id << ": no test cases: " << entry["error"].get<std::string>() << "\n";
    }
    json ids = json::array();
    for (const auto& tc : o.suite.cases) {
      write_file(out_dir / "cases" / path_token(story.id) / (path_token(tc.id) + ".json"), serialize_test_case(tc));
      ids.push_back(tc.id);
    }
    entry["cases"] = ids;
    entry["pruned"] = o.dedup.pruned;
    entry["iterations"] = o.suite.iterations;
    entry["rejected_fragments"] = o.suite.rejected_fragments.size();
    if (o.suite.report) entry["judge"] = generation::to_json(*o.suite.report);
    stories_json.push_back(entry);
    inputs.generation.push_back(report::generation_evidence(cfg.models.generator, story, o.suite));
    out << story.id << ": " << o.suite.cases.size() << " cases, " << o.dedup.pruned.size() << " pruned\n";
  }
  json evidence = json::array();
  for (const auto& e : inputs.generation) evidence.push_back(report::to_json(e));
  write_file(out_dir / "generation.report.json",
             json{{"schema", kGenerationSchema}, {"stories", stories_json}, {"evidence", evidence}}.dump(2) + "\n");
  write_file(out_dir / "generation.report.md", report::render_markdown(report::aggregate(inputs, cfg.rates)));
  return code;
}

struct JudgeFlags {
  std::string stories, cases;
  std::optional<std::string> context, report;
};

int cmd_judge(const Config& cfg, const JudgeFlags& f, std::ostream& out, std::ostream&) {
  std::vector<UserStory> stories;
  try {
    stories = load_user_stories(f.stories);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (stories.empty()) throw UsageError("no stories in " + f.stories);
  auto client = language_model(cfg);
  const auto prompts = templates(cfg);
  const auto context_dir = f.context ? std::optional<fs::path>(*f.context) : cfg.retrieval.context_dir;
  std::optional<retrieval::Store> store;
  if (context_dir) store = retrieval::index(retrieval::load_corpus(*context_dir), cfg.retrieval.chunking, *client);
  int code = kSuccess;
  json reports = json::object();
  for (const auto& story : stories) {
    const auto dir = fs::path(f.cases) / path_token(story.id);
    if (!fs::is_directory(dir)) continue;
    const auto cases = load_test_cases(dir);
    retrieval::ContextBundle context;
    if (store) context = retrieval::retrieve(*store, story.title, cfg.retrieval.k, cfg.retrieval.token_budget, *client);
    const auto r = generation::judge_suite(cases, story, context, *client, cfg.models.judge, prompts);
    if (!r.clean()) code = merge(code, kVerdictFailures);
    reports[story.id] = generation::to_json(r);
    out << story.id << ": " << (r.clean() ? "clean" : "issues found") << "\n";
  }
  if (reports.empty()) throw UsageError("no case directories for the given stories under " + f.cases);
  const auto file = f.report ? fs::path(*f.report) : output_root(cfg) / "judge.report.json";
  write_file(file, json{{"schema", kJudgeSchema}, {"reports", reports}}.dump(2) + "\n");
  return code;
}

struct RunFlags {
  std::string cases;
  std::optional<std::string> target, report, agent;
  std::optional<int> repeat;
};

int cmd_run(const Config& cfg, const RunFlags& f, std::ostream& out, std::ostream&) {
  const auto cases = load_cases(f.cases);
  const auto target = resolve_target(cfg, pick(f.target, cfg.execution.target, std::string("sim")));
  const int repeat = pick(f.repeat, cfg.execution.repeat, 1);
  if (repeat < 1) throw UsageError("--repeat must be at least 1");
  const auto file = f.report ? fs::path(*f.report) : output_root(cfg) / "run.report.json";
  const auto agents = resolve_agent(cfg, f.agent, target);
  const auto prompts = templates(cfg);

  std::vector<Job> jobs;
  for (const auto& roles : cfg.role_sets())
    for (const auto& tc : cases)
      for (int r = 0; r < repeat; ++r) jobs.push_back({&tc, roles, r});
  std::vector<agent::ExecutionRecord> records(jobs.size());
  parallel_for(jobs.size(), target.sim ? cfg.concurrency : 1,
               [&](std::size_t i) { records[i] = execute(jobs[i], cfg, target, agents, prompts); });

  const auto dir = file.parent_path().empty() ? fs::path(".") : file.parent_path();
  report::ReportInputs inputs;
  inputs.trace_index = write_records(dir, jobs, records);
  inputs.run_sets = report::group_records(records);
  write_report(file, report::aggregate(inputs, cfg.rates));

  int code = kSuccess;
  for (const auto& rs : inputs.run_sets)
    if (report::flaky_rate(rs).unexpected > 0) code = merge(code, kVerdictFailures);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& r = records[i];
    out << r.case_id << " [" << report::model_key(r.roles) << "] run " << jobs[i].repetition << ": "
        << agent::to_string(r.final_verdict.status);
    if (r.guardrail_trip) {
      code = merge(code, kGuardrailTrips);
      out << " (guardrail " << agent::to_string(r.guardrail_trip->reason) << " at event " << r.guardrail_trip->at_step
          << ")";
    }
    out << "\n";
  }
  return code;
}

std::vector<MutationKind> parse_kinds(const std::string& list) {
  std::vector<MutationKind> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item == "data") out.push_back(MutationKind::data_corruption);
    else if (item == "expectation") out.push_back(MutationKind::expectation_corruption);
    else if (item == "step") out.push_back(MutationKind::step_corruption);
    else throw UsageError("unknown mutation kind '" + item + "' (expected data, expectation or step)");
  }
  if (out.empty()) throw UsageError("--kinds is empty");
  return out;
}

struct MutateFlags {
  std::string cases;
  std::optional<std::string> kinds, out;
  std::optional<std::uint64_t> seed;
};

int cmd_mutate(const Config& cfg, const MutateFlags& f, std::ostream& out, std::ostream& err) {
  const auto kinds = parse_kinds(pick(f.kinds, cfg.kinds, std::string("data,expectation,step")));
  const auto seed = pick(f.seed, cfg.seed, std::uint64_t{0});
  const auto out_dir = f.out ? fs::path(*f.out) : output_root(cfg) / "mutants";
  const auto cases = load_cases(f.cases);
  int written = 0;
  for (const auto& tc : cases) {
    for (auto kind : kinds) {
      try {
        const auto m = quality::mutate_case(tc, kind, seed);
        write_file(out_dir / (path_token(m.mutant.id) + ".json"), serialize_test_case(m.mutant));
        out << m.mutant.id << ": " << m.diff.path << ": " << m.diff.original << " -> " << m.diff.mutated << "\n";
        ++written;
      } catch (const quality::NoMutableFieldError& e) {
        err << tc.id << ": skipped " << to_string(kind) << ": " << e.what() << "\n";
      }
    }
  }
  out << written << " mutants written to " << out_dir.string() << "\n";
  return kSuccess;
}

struct AuditFlags {
  std::string mutants;
  std::optional<std::string> target, report, agent;
};

int cmd_audit_mutants(const Config& cfg, const AuditFlags& f, std::ostream& out, std::ostream&) {
  const auto cases = load_cases(f.mutants);
  std::vector<quality::MutantCase> mutants;
  for (const auto& tc : cases) {
    try {
      mutants.push_back(quality::as_mutant(tc));
    } catch (const Error& e) {
      throw UsageError(tc.id + ": " + e.what());
    }
  }
  const auto target = resolve_target(cfg, pick(f.target, cfg.execution.target, std::string("sim")));
  const auto file = f.report ? fs::path(*f.report) : output_root(cfg) / "mutation.audit.json";
  const auto agents = resolve_agent(cfg, f.agent, target);
  const auto prompts = templates(cfg);
  const auto roles = cfg.role_sets().front();

  std::vector<Job> jobs;
  for (const auto& tc : cases) jobs.push_back({&tc, roles, 0});
  std::vector<agent::ExecutionRecord> records(jobs.size());
  parallel_for(jobs.size(), target.sim ? cfg.concurrency : 1,
               [&](std::size_t i) { records[i] = execute(jobs[i], cfg, target, agents, prompts); });

  const auto dir = file.parent_path().empty() ? fs::path(".") : file.parent_path();
  write_records(dir, jobs, records);
  int code = kSuccess;
  json audits = json::array();
  std::vector<quality::MutationAudit> list;
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    const auto a = quality::audit_mutant(mutants[i], records[i]);
    list.push_back(a);
    audits.push_back(quality::to_json(a));
    if (!a.caught || a.mutation_corrected) code = merge(code, kVerdictFailures);
    if (records[i].guardrail_trip) code = merge(code, kGuardrailTrips);
    out << a.mutant_id << ": " << agent::to_string(a.final_status) << (a.caught ? ", caught" : ", not caught")
        << (a.mutation_corrected ? ", corrected" : "") << (a.disagreement ? ", disagreement" : "") << "\n";
  }
  const auto summary = report::aggregate({{}, {}, list, {}}, cfg.rates).mutation;
  write_file(file, json{{"schema", kAuditSchema},
                        {"audits", audits},
                        {"summary",
                         {{"mutants", summary.mutants},
                          {"caught", summary.caught},
                          {"corrected", summary.corrected},
                          {"disagreements", summary.disagreements}}}}
                           .dump(2) +
                       "\n");
  return code;
}

struct MetamorphFlags {
  std::string suite;
  std::optional<std::string> report;
};

int cmd_metamorph(const Config& cfg, const MetamorphFlags& f, std::ostream& out, std::ostream&) {
  quality::MetamorphicSuite suite;
  try {
    suite = quality::load_metamorphic_suite(f.suite);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::map<std::string, quality::SutAdapter*> adapters;
  std::optional<quality::CorpusFilterAdapter> good, buggy;
  std::optional<quality::SimSearchAdapter> sim;
  quality::SynonymTable synonyms;
  try {
    if (suite.corpus) {
      const auto records = quality::load_corpus_records(*suite.corpus);
      adapters["corpus_filter"] = &good.emplace(records);
      adapters["corpus_filter_buggy"] = &buggy.emplace(records, true);
    }
    if (suite.sim_fixture) adapters["sim_search"] = &sim.emplace(browser::load_sim_fixture(*suite.sim_fixture));
    if (suite.synonyms) synonyms = quality::SynonymTable::load(*suite.synonyms);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto r = quality::run_metamorphic_suite(adapters, suite.cases, synonyms);
  const auto file = f.report ? fs::path(*f.report) : output_root(cfg) / "metamorphic.report.json";
  write_file(file, quality::to_json(r).dump(2) + "\n");
  for (const auto& o : r.outcomes) {
    out << o.case_id << ": ";
    if (o.verdict) out << (o.verdict->holds ? "holds" : "VIOLATED") << " (" << o.verdict->explanation << ")\n";
    else out << "inconclusive (" << o.error.value_or("") << ")\n";
  }
  out << r.violations << " violations, " << r.inconclusive << " inconclusive\n";
  return r.violations > 0 ? kVerdictFailures : kSuccess;
}

struct ReportFlags {
  std::string in;
  std::string format = "md";
};

int cmd_report(const Config& cfg, const ReportFlags& f, std::ostream& out, std::ostream&) {
  const fs::path root(f.in);
  if (!fs::is_directory(root)) throw UsageError("not a directory: " + f.in);
  report::ReportInputs inputs;
  std::vector<agent::ExecutionRecord> records;
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    if (p.extension() == ".jsonl") {
      inputs.trace_index.push_back(fs::relative(p, root).generic_string());
      continue;
    }
    if (p.extension() != ".json") continue;
    json j;
    try {
      j = json::parse(read_file(p));
    } catch (const json::parse_error& e) {
      throw UsageError(p.string() + ": " + e.what());
    }
    if (!j.is_object()) continue;
    const auto schema = j.value("schema", std::string());
    try {
      if (schema == kGenerationSchema) {
        for (const auto& e : j.at("evidence")) inputs.generation.push_back(report::generation_evidence_from_json(e));
      } else if (schema == kAuditSchema) {
        for (const auto& a : j.at("audits")) inputs.audits.push_back(quality::mutation_audit_from_json(a));
      } else if (schema.empty() && j.contains("case_id") && j.contains("events")) {
        records.push_back(agent::execution_record_from_json(j));
      }
    } catch (const json::exception& e) {
      throw UsageError(p.string() + ": " + e.what());
    } catch (const Error& e) {
      throw UsageError(p.string() + ": " + e.what());
    }
  }
  inputs.run_sets = report::group_records(records);
  const auto r = report::aggregate(inputs, cfg.rates);
  if (f.format == "md") out << report::render_markdown(r);
  else out << report::render_machine(r);
  return kSuccess;
}

template <class T>
void optional_flag(CLI::App* cmd, const std::string& name, std::optional<T>& target, const std::string& help) {
  cmd->add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"aqua: agentic QA pipeline for web applications"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  optional_flag(&app, "--config", config_path, "config file (default ./aqua.config)");

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "generate test cases from user stories");
  generate->add_option("--stories", gen.stories, "story directory")->required();
  optional_flag(generate, "--out", gen.out, "output directory");
  optional_flag(generate, "--context", gen.context, "context document directory");
  generate->add_flag("--judge", gen.judge, "run the judge and autocorrection loop");
  optional_flag(generate, "--max-iter", gen.max_iter, "autocorrection rounds");

  JudgeFlags jf;
  auto* judge = app.add_subcommand("judge", "judge existing suites");
  judge->add_option("--stories", jf.stories, "story directory")->required();
  judge->add_option("--cases", jf.cases, "suite directory with one subdirectory per story")->required();
  optional_flag(judge, "--context", jf.context, "context document directory");
  optional_flag(judge, "--report", jf.report, "judge report file");

  RunFlags rf;
  auto* run = app.add_subcommand("run", "execute test cases with the agent");
  run->add_option("--cases", rf.cases, "case directory")->required();
  optional_flag(run, "--target", rf.target, "sim or a URL");
  optional_flag(run, "--repeat", rf.repeat, "executions per case");
  optional_flag(run, "--report", rf.report, "report file (.md for markdown)");
  optional_flag(run, "--agent", rf.agent, "auto, llm, honest, naive or corrective");

  MutateFlags mf;
  auto* mutate = app.add_subcommand("mutate", "write single-point mutants");
  mutate->add_option("--cases", mf.cases, "case directory")->required();
  optional_flag(mutate, "--kinds", mf.kinds, "comma list of data, expectation, step");
  optional_flag(mutate, "--seed", mf.seed, "mutation seed");
  optional_flag(mutate, "--out", mf.out, "mutant directory");

  AuditFlags af;
  auto* audit = app.add_subcommand("audit-mutants", "execute mutants and audit the traces");
  audit->add_option("--mutants", af.mutants, "mutant directory")->required();
  optional_flag(audit, "--target", af.target, "sim or a URL");
  optional_flag(audit, "--report", af.report, "audit report file");
  optional_flag(audit, "--agent", af.agent, "auto, llm, honest, naive or corrective");

  MetamorphFlags xf;
  auto* metamorph = app.add_subcommand("metamorph", "evaluate a metamorphic suite");
  metamorph->add_option("--suite", xf.suite, "suite file")->required();
  optional_flag(metamorph, "--report", xf.report, "report file");

  ReportFlags pf;
  auto* rep = app.add_subcommand("report", "render a report from a records directory");
  rep->add_option("--in", pf.in, "records directory")->required();
  rep->add_option("--format", pf.format, "md or machine")->check(CLI::IsMember({"md", "machine"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    Config cfg = default_config();
    if (config_path) cfg = load_config(*config_path);
    else if (fs::exists("aqua.config")) cfg = load_config("aqua.config");

    if (*generate) return cmd_generate(cfg, gen, out, err);
    if (*judge) return cmd_judge(cfg, jf, out, err);
    if (*run) return cmd_run(cfg, rf, out, err);
    if (*mutate) return cmd_mutate(cfg, mf, out, err);
    if (*audit) return cmd_audit_mutants(cfg, af, out, err);
    if (*metamorph) return cmd_metamorph(cfg, xf, out, err);
    if (*rep) return cmd_report(cfg, pf, out, err);
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace aqua::cli
