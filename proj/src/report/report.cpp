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

#include "aqua/report/report.hpp"

#include <map>
#include <sstream>

#include "aqua/core/coverage.hpp"

namespace aqua::report {
namespace {

using nlohmann::json;
using agent::VerdictStatus;

constexpr std::string_view kNa = "n/a";
constexpr std::string_view kUnavailable = "unavailable";

json usage_json(const llm::Usage& u) {
  return {{"prompt_tokens", u.prompt_tokens}, {"completion_tokens", u.completion_tokens}};
}

llm::Usage usage_from(const json& j) {
  return {j.at("prompt_tokens").get<std::int64_t>(), j.at("completion_tokens").get<std::int64_t>()};
}

json rational_json(const std::optional<Rational>& r) { return r ? json(to_string(*r)) : json(nullptr); }

std::optional<Rational> rational_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_rational(j.get<std::string>());
}

json cost_json(const std::optional<llm::Currency>& c) { return c ? json(to_string(c->amount)) : json(nullptr); }

std::optional<llm::Currency> cost_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return llm::Currency{parse_rational(j.get<std::string>())};
}

std::optional<llm::Currency> record_cost(const agent::ExecutionRecord& r, const llm::RateTable& rates) {
  llm::Currency total;
  for (const auto& e : r.events) {
    if (e.usage_delta.total() == 0) continue;
    if (!rates.contains(e.model)) return std::nullopt;
    total = total + llm::estimate_cost(e.usage_delta, e.model, rates);
  }
  return total;
}

std::string percent_cell(const std::optional<Rational>& r) { return r ? format_percent(*r) : std::string(kNa); }

std::string cost_cell(const std::optional<llm::Currency>& c) {
  return c ? "$" + c->to_string() : std::string(kUnavailable);
}

// Table cells must not break the pipe layout.
std::string cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

}  // namespace

std::string model_key(const agent::ModelRoles& roles) {
  if (roles.planner == roles.executor) return roles.planner;
  return roles.planner + "+" + roles.executor;
}

void RunSet::validate() const {
  if (records.empty()) throw SchemaError("run_set." + flow, "needs at least one record");
  if (expected == VerdictStatus::inconclusive) throw SchemaError("run_set." + flow, "expected verdict must be passed or failed");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.case_id != flow || model_key(r.roles) != model)
      throw SchemaError("run_set." + flow + ".records[" + std::to_string(i) + "]",
                        "belongs to " + r.case_id + " / " + model_key(r.roles));
  }
}

FlakinessEntry flaky_rate(const RunSet& runs) {
  runs.validate();
  FlakinessEntry e{runs.flow, runs.model, static_cast<std::int64_t>(runs.records.size()), 0, Rational(0)};
  for (const auto& r : runs.records)
    if (r.final_verdict.status != runs.expected) ++e.unexpected;
  e.rate = Rational(e.unexpected, e.n);
  return e;
}

std::vector<RunSet> group_records(std::span<const agent::ExecutionRecord> records) {
  std::vector<RunSet> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.case_id, model_key(r.roles));
    auto it = index.find(key);
    if (it == index.end()) {
      const bool mutant = r.case_id.find('~') != std::string::npos;
      it = index.emplace(key, out.size()).first;
      out.push_back({key.first, key.second, mutant ? VerdictStatus::failed : VerdictStatus::passed, {}});
    }
    out[it->second].records.push_back(r);
  }
  return out;
}

GenerationEvidence generation_evidence(const std::string& model, const UserStory& story,
                                       const generation::GeneratedSuite& suite) {
  GenerationEvidence e;
  e.model = model;
  e.story_id = story.id;
  const auto coverage = compute_coverage(story, suite.cases);
  e.ac_total = static_cast<std::int64_t>(story.acceptance_criteria.size());
  e.ac_covered = static_cast<std::int64_t>(coverage.covered_ids().size());
  e.cases = static_cast<std::int64_t>(suite.cases.size());
  if (suite.report) {
    for (const auto& tc : suite.cases)
      for (const auto& j : suite.report->cases)
        if (j.case_id == tc.id && j.valid) ++e.executable_cases;
  } else {
    e.executable_cases = e.cases;
  }
  e.usage = suite.usage;
  return e;
}

json to_json(const GenerationEvidence& e) {
  return {{"model", e.model},         {"story_id", e.story_id},
          {"ac_total", e.ac_total},   {"ac_covered", e.ac_covered},
          {"cases", e.cases},         {"executable_cases", e.executable_cases},
          {"usage", usage_json(e.usage)}};
}

GenerationEvidence generation_evidence_from_json(const json& j) {
  try {
    return {j.at("model").get<std::string>(),         j.at("story_id").get<std::string>(),
            j.at("ac_total").get<std::int64_t>(),     j.at("ac_covered").get<std::int64_t>(),
            j.at("cases").get<std::int64_t>(),        j.at("executable_cases").get<std::int64_t>(),
            usage_from(j.at("usage"))};
  } catch (const json::exception& ex) {
    throw SchemaError("generation_evidence", ex.what());
  }
}

std::optional<Rational> MutationSummary::caught_rate() const {
  if (mutants == 0) return std::nullopt;
  return Rational(caught, mutants);
}

std::optional<Rational> MutationSummary::corrected_rate() const {
  if (mutants == 0) return std::nullopt;
  return Rational(corrected, mutants);
}

SuiteReport aggregate(const ReportInputs& inputs, const llm::RateTable& rates) {
  SuiteReport out;

  std::map<std::string, std::size_t> gen_index;
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> ac;
  for (const auto& e : inputs.generation) {
    auto it = gen_index.find(e.model);
    if (it == gen_index.end()) {
      it = gen_index.emplace(e.model, out.generation.size()).first;
      GenerationRow row;
      row.model = e.model;
      row.cost = rates.contains(e.model) ? std::optional<llm::Currency>(llm::Currency{}) : std::nullopt;
      out.generation.push_back(row);
    }
    auto& row = out.generation[it->second];
    ++row.stories;
    row.cases += e.cases;
    row.executable_cases += e.executable_cases;
    row.usage += e.usage;
    if (row.cost) *row.cost = *row.cost + llm::estimate_cost(e.usage, e.model, rates);
    ac[e.model].first += e.ac_covered;
    ac[e.model].second += e.ac_total;
  }
  for (auto& row : out.generation) {
    const auto [covered, total] = ac[row.model];
    if (total > 0) row.ac_coverage = Rational(covered, total);
  }

  for (const auto& rs : inputs.run_sets) {
    ExecutionRow row;
    row.flakiness = flaky_rate(rs);
    row.flow = rs.flow;
    row.flow_name = rs.records.front().flow_name;
    row.model = rs.model;
    Rational wall(0), tokens(0);
    std::optional<llm::Currency> cost = llm::Currency{};
    for (const auto& r : rs.records) {
      for (const auto& e : r.events) wall += e.elapsed_ms;
      if (r.guardrail_trip) ++row.guardrail_trips[std::string(agent::to_string(r.guardrail_trip->reason))];
      tokens += r.totals.total();
      const auto c = record_cost(r, rates);
      cost = cost && c ? std::optional<llm::Currency>(*cost + *c) : std::nullopt;
    }
    const auto n = row.flakiness.n;
    row.avg_time_ms = wall / n;
    row.avg_tokens = tokens / n;
    if (cost) row.avg_cost = llm::Currency{cost->amount / n};
    out.total_runs += n;
    out.total_unexpected += row.flakiness.unexpected;
    out.execution.push_back(std::move(row));
  }
  if (out.total_runs > 0) out.aggregate_flaky = Rational(out.total_unexpected, out.total_runs);

  for (const auto& a : inputs.audits) {
    ++out.mutation.mutants;
    out.mutation.caught += a.caught;
    out.mutation.corrected += a.mutation_corrected;
    out.mutation.disagreements += a.disagreement;
  }
  out.trace_index = inputs.trace_index;
  return out;
}

json to_json(const SuiteReport& r) {
  json gen = json::array();
  for (const auto& g : r.generation)
    gen.push_back({{"model", g.model},
                   {"stories", g.stories},
                   {"ac_coverage", rational_json(g.ac_coverage)},
                   {"executable_cases", g.executable_cases},
                   {"cases", g.cases},
                   {"usage", usage_json(g.usage)},
                   {"cost_usd", cost_json(g.cost)}});
  json exec = json::array();
  for (const auto& e : r.execution)
    exec.push_back({{"flow", e.flow},
                    {"flow_name", e.flow_name},
                    {"model", e.model},
                    {"runs", e.flakiness.n},
                    {"unexpected", e.flakiness.unexpected},
                    {"flaky_rate", to_string(e.flakiness.rate)},
                    {"avg_time_ms", to_string(e.avg_time_ms)},
                    {"avg_tokens", to_string(e.avg_tokens)},
                    {"avg_cost_usd", cost_json(e.avg_cost)},
                    {"guardrail_trips", e.guardrail_trips}});
  return {{"schema", kReportSchema},
          {"unexpected_outcome", "final verdict differs from the expected verdict; inconclusive counts as unexpected"},
          {"generation", gen},
          {"execution", exec},
          {"total_runs", r.total_runs},
          {"total_unexpected", r.total_unexpected},
          {"aggregate_flaky_rate", rational_json(r.aggregate_flaky)},
          {"mutation_audit",
           {{"mutants", r.mutation.mutants},
            {"caught", r.mutation.caught},
            {"corrected", r.mutation.corrected},
            {"disagreements", r.mutation.disagreements}}},
          {"trace_index", r.trace_index}};
}

SuiteReport suite_report_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema)
      throw SchemaError("schema", "unsupported report schema " + j.at("schema").dump());
    SuiteReport r;
    for (const auto& g : j.at("generation"))
      r.generation.push_back({g.at("model").get<std::string>(), g.at("stories").get<std::int64_t>(),
                              rational_from(g.at("ac_coverage")), g.at("executable_cases").get<std::int64_t>(),
                              g.at("cases").get<std::int64_t>(), usage_from(g.at("usage")), cost_from(g.at("cost_usd"))});
    for (const auto& e : j.at("execution")) {
      ExecutionRow row;
      row.flow = e.at("flow").get<std::string>();
      row.flow_name = e.at("flow_name").get<std::string>();
      row.model = e.at("model").get<std::string>();
      row.flakiness = {row.flow, row.model, e.at("runs").get<std::int64_t>(), e.at("unexpected").get<std::int64_t>(),
                       parse_rational(e.at("flaky_rate").get<std::string>())};
      row.avg_time_ms = parse_rational(e.at("avg_time_ms").get<std::string>());
      row.avg_tokens = parse_rational(e.at("avg_tokens").get<std::string>());
      row.avg_cost = cost_from(e.at("avg_cost_usd"));
      row.guardrail_trips = e.at("guardrail_trips").get<std::map<std::string, std::int64_t>>();
      r.execution.push_back(std::move(row));
    }
    r.total_runs = j.at("total_runs").get<std::int64_t>();
    r.total_unexpected = j.at("total_unexpected").get<std::int64_t>();
    r.aggregate_flaky = rational_from(j.at("aggregate_flaky_rate"));
    const auto& m = j.at("mutation_audit");
    r.mutation = {m.at("mutants").get<std::int64_t>(), m.at("caught").get<std::int64_t>(),
                  m.at("corrected").get<std::int64_t>(), m.at("disagreements").get<std::int64_t>()};
    r.trace_index = j.at("trace_index").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& ex) {
    throw SchemaError("report", ex.what());
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& ex) {
    throw SchemaError("report", ex.what());
  }
}

std::string render_machine(const SuiteReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_markdown(const SuiteReport& r) {
  std::ostringstream out;
  out << "# Aqua report\n\n"
      << "Unexpected outcome: the final verdict differs from the expected verdict. "
      << "Inconclusive runs count as unexpected.\n\n";

  out << "## Generation\n\n";
  if (r.generation.empty()) {
    out << "n/a\n\n";
  } else {
    out << "| Model | AC covered | Executable TC | Tokens | Cost |\n|---|---|---|---|---|\n";
    for (const auto& g : r.generation)
      out << "| " << cell(g.model) << " | " << percent_cell(g.ac_coverage) << " | " << g.executable_cases << "/"
          << g.cases << " | " << g.usage.total() << " | " << cost_cell(g.cost) << " |\n";
    out << "\n";
  }

  out << "## Execution\n\n";
  if (r.execution.empty()) {
    out << "n/a\n\n";
  } else {
    out << "| Flow | Model | Runs | Avg time (s) | Avg tokens | Avg price | Flaky |\n"
        << "|---|---|---|---|---|---|---|\n";
    for (const auto& e : r.execution)
      out << "| " << cell(e.flow) << " | " << cell(e.model) << " | "
          << e.flakiness.n << " | " << format_fixed(e.avg_time_ms / 1000, 1) << " | " << format_fixed(e.avg_tokens, 0)
          << " | " << cost_cell(e.avg_cost) << " | " << format_percent(e.flakiness.rate) << " |\n";
    out << "\n";
  }
  out << "Aggregate flaky rate: " << percent_cell(r.aggregate_flaky);
  if (r.aggregate_flaky) out << " (" << r.total_unexpected << "/" << r.total_runs << ")";
  out << "\n\n";
  bool tripped = false;
  for (const auto& e : r.execution)
    for (const auto& [reason, n] : e.guardrail_trips) {
      if (!tripped) out << "Guardrail trips:\n\n";
      tripped = true;
      out << "- " << e.flow << " [" << e.model << "]: " << reason << " in " << n << " of " << e.flakiness.n
          << " runs\n";
    }
  if (tripped) out << "\n";

  out << "## Mutation audit\n\n";
  out << "| Mutants | Caught | Corrected | Disagreements |\n|---|---|---|---|\n"
      << "| " << r.mutation.mutants << " | " << percent_cell(r.mutation.caught_rate()) << " | "
      << percent_cell(r.mutation.corrected_rate()) << " | " << r.mutation.disagreements << " |\n\n";

  out << "## Traces\n\n";
  if (r.trace_index.empty()) out << "n/a\n";
  for (const auto& t : r.trace_index) out << "- " << t << "\n";
  return out.str();
}

}  // namespace aqua::report
