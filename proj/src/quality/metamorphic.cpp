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

#include "aqua/quality/metamorphic.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include "aqua/agent/verify.hpp"
#include "aqua/core/test_case_io.hpp"

namespace aqua::quality {
namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1));
}

std::vector<std::string> words(std::string_view text) {
  std::istringstream ss{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

const std::string& as_text(const Value& x, TransformKind kind) {
  if (const auto* s = std::get_if<std::string>(&x)) return *s;
  throw InapplicableTransformation(std::string(to_string(kind)) + " needs a text input");
}

template <typename E, std::size_t N>
std::string_view name_in(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "";
}

template <typename E, std::size_t N>
E lookup_in(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view text, const char* what) {
  for (const auto& [e, name] : table)
    if (name == text) return e;
  throw SchemaError(what, "unknown value '" + std::string(text) + "'");
}

constexpr std::array<std::pair<RelationKind, std::string_view>, 3> kRelations{
    {{RelationKind::invariance, "invariance"}, {RelationKind::increase, "increase"}, {RelationKind::decrease, "decrease"}}};
constexpr std::array<std::pair<OutputDomain, std::string_view>, 2> kDomains{
    {{OutputDomain::numeric, "numeric"}, {OutputDomain::discrete, "discrete"}}};
constexpr std::array<std::pair<TransformKind, std::string_view>, 6> kTransforms{{
    {TransformKind::identity, "identity"},
    {TransformKind::typo, "typo"},
    {TransformKind::synonym, "synonym"},
    {TransformKind::restrictive_keyword, "restrictive_keyword"},
    {TransformKind::numeric_shift, "numeric_shift"},
    {TransformKind::categorical_switch, "categorical_switch"},
}};

}  // namespace

std::string describe(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream ss;
    ss << *d;
    return ss.str();
  }
  return "\"" + std::get<std::string>(v) + "\"";
}

json to_json(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::get<std::string>(v);
}

Value value_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw SchemaError("value", "expected a number or a string");
}

std::string_view to_string(RelationKind kind) { return name_in(kRelations, kind); }
RelationKind parse_relation_kind(std::string_view text) { return lookup_in(kRelations, text, "relation.kind"); }
std::string_view to_string(OutputDomain domain) { return name_in(kDomains, domain); }
OutputDomain parse_output_domain(std::string_view text) { return lookup_in(kDomains, text, "relation.domain"); }
std::string_view to_string(TransformKind kind) { return name_in(kTransforms, kind); }
TransformKind parse_transform_kind(std::string_view text) { return lookup_in(kTransforms, text, "transformation.kind"); }

void MetamorphicRelation::validate() const {
  if (!(epsilon >= 0.0)) throw ConfigError("relation epsilon must be non-negative");
  if (epsilon != 0.0 && (kind != RelationKind::invariance || domain != OutputDomain::numeric))
    throw ConfigError("epsilon applies to numeric invariance only");
  if (kind != RelationKind::invariance && domain == OutputDomain::discrete)
    throw ConfigError(std::string(to_string(kind)) + " needs a numeric output domain");
}

RelationVerdict evaluate_relation(const MetamorphicRelation& r, const Value& y, const Value& y_prime) {
  if (r.kind != RelationKind::invariance && r.domain == OutputDomain::discrete)
    throw DomainError(std::string(to_string(r.kind)) + " is undefined over discrete outputs");
  r.validate();
  RelationVerdict v{false, y, y_prime, ""};
  const auto pair = "y=" + describe(y) + ", y'=" + describe(y_prime);

  if (r.domain == OutputDomain::discrete) {
    if (!std::holds_alternative<std::string>(y) || !std::holds_alternative<std::string>(y_prime))
      throw DomainError("discrete relation needs text outputs, got " + pair);
    v.holds = y == y_prime;
    v.explanation = pair + (v.holds ? ": outputs are equal" : ": outputs differ");
    return v;
  }
  const auto* a = std::get_if<double>(&y);
  const auto* b = std::get_if<double>(&y_prime);
  if (!a || !b || std::isnan(*a) || std::isnan(*b)) throw DomainError("numeric relation needs numeric outputs, got " + pair);
  switch (r.kind) {
    case RelationKind::invariance:
      v.holds = std::fabs(*a - *b) <= r.epsilon;
      v.explanation = pair + (v.holds ? ": within " : ": differ by more than ") + describe(r.epsilon);
      break;
    case RelationKind::increase:
      v.holds = r.strict ? *b > *a : *b >= *a;
      v.explanation = pair + (v.holds ? ": output increased" : ": output did not increase");
      break;
    case RelationKind::decrease:
      v.holds = r.strict ? *b < *a : *b <= *a;
      v.explanation = pair + (v.holds ? ": output decreased" : ": output did not decrease");
      break;
  }
  return v;
}

SynonymTable SynonymTable::parse(std::string_view text) {
  SynonymTable t;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string> group;
    std::istringstream fields(line);
    for (std::string w; std::getline(fields, w, ',');)
      if (auto word = lower(trim(w)); !word.empty()) group.push_back(word);
    if (group.size() >= 2) t.groups.push_back(std::move(group));
  }
  return t;
}

SynonymTable SynonymTable::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::vector<std::string> SynonymTable::synonyms_of(std::string_view word) const {
  const auto w = lower(word);
  std::vector<std::string> out;
  for (const auto& g : groups) {
    if (std::find(g.begin(), g.end(), w) == g.end()) continue;
    for (const auto& s : g)
      if (s != w && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

Value apply_transformation(const Value& x, const Transformation& t, std::uint64_t seed, const SynonymTable& synonyms) {
  std::mt19937_64 rng(seed);
  switch (t.kind) {
    case TransformKind::identity:
      return x;
    case TransformKind::typo: {
      auto s = as_text(x, t.kind);
      std::vector<std::size_t> spots;
      for (std::size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] != s[i + 1] && !std::isspace(static_cast<unsigned char>(s[i])) &&
            !std::isspace(static_cast<unsigned char>(s[i + 1])))
          spots.push_back(i);
      if (spots.empty()) throw InapplicableTransformation("typo needs two adjacent distinct characters");
      const auto i = pick(spots, rng);
      std::swap(s[i], s[i + 1]);
      return s;
    }
    case TransformKind::synonym: {
      auto ws = words(as_text(x, t.kind));
      std::vector<std::size_t> spots;
      for (std::size_t i = 0; i < ws.size(); ++i)
        if (!synonyms.synonyms_of(ws[i]).empty()) spots.push_back(i);
      if (spots.empty()) throw InapplicableTransformation("no word of the input has a synonym");
      const auto i = pick(spots, rng);
      ws[i] = pick(synonyms.synonyms_of(ws[i]), rng);
      std::string out;
      for (const auto& w : ws) out += (out.empty() ? "" : " ") + w;
      return out;
    }
    case TransformKind::restrictive_keyword: {
      const auto& s = as_text(x, t.kind);
      if (trim(t.keyword).empty()) throw InapplicableTransformation("restrictive_keyword needs a keyword");
      return s + " " + trim(t.keyword);
    }
    case TransformKind::numeric_shift: {
      const auto* d = std::get_if<double>(&x);
      if (!d) throw InapplicableTransformation("numeric_shift needs a numeric input");
      return *d + t.delta;
    }
    case TransformKind::categorical_switch: {
      const auto& s = as_text(x, t.kind);
      if (std::find(t.categories.begin(), t.categories.end(), s) == t.categories.end())
        throw InapplicableTransformation("input \"" + s + "\" is not in the category set");
      std::vector<std::string> others;
      for (const auto& c : t.categories)
        if (c != s && std::find(others.begin(), others.end(), c) == others.end()) others.push_back(c);
      if (others.empty()) throw InapplicableTransformation("category set has no alternative to \"" + s + "\"");
      return pick(others, rng);
    }
  }
  throw InapplicableTransformation("unknown transformation");
}

std::vector<CorpusRecord> load_corpus_records(const std::filesystem::path& path) {
  const auto j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_array()) throw SchemaError(path.filename().string(), "corpus must be a JSON array");
  std::vector<CorpusRecord> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& r = j[i];
    if (!r.is_object() || !r.contains("id") || !r.contains("title") || !r.contains("text"))
      throw SchemaError("[" + std::to_string(i) + "]", "record needs id, title and text");
    out.push_back({r.at("id").get<std::string>(), r.at("title").get<std::string>(), r.at("text").get<std::string>()});
  }
  return out;
}

CorpusFilterAdapter::CorpusFilterAdapter(std::vector<CorpusRecord> records, bool drop_last_word)
    : records_(std::move(records)), drop_last_word_(drop_last_word) {}

Value CorpusFilterAdapter::evaluate(const Value& x) {
  const auto* q = std::get_if<std::string>(&x);
  if (!q) throw Error("corpus filter needs a text query");
  auto terms = words(lower(*q));
  if (drop_last_word_ && terms.size() > 1) terms.pop_back();
  double count = 0;
  for (const auto& r : records_) {
    const auto hay = lower(r.title + " " + r.text);
    if (std::all_of(terms.begin(), terms.end(), [&](const std::string& t) { return hay.find(t) != std::string::npos; }))
      ++count;
  }
  return count;
}

SimSearchAdapter::SimSearchAdapter(browser::SimFixture fixture) : fixture_(std::move(fixture)) {
  fixture_.fault_plan = {};
  fixture_.validate();
}

Value SimSearchAdapter::evaluate(const Value& x) {
  const auto* q = std::get_if<std::string>(&x);
  if (!q) throw Error("sim search needs a text query");
  browser::SimSession session(fixture_, 0);
  const std::vector<Action> login{{ActionKind::navigate, "", std::string("/")},
                                  {ActionKind::type_text, "user-name", std::string("standard_user")},
                                  {ActionKind::type_text, "password", fixture_.users.at("standard_user")},
                                  {ActionKind::click, "login-button", std::nullopt},
                                  {ActionKind::type_text, "search-input", *q}};
  browser::Observation obs;
  for (const auto& a : login) {
    obs = session.apply(a);
    if (obs.last_outcome != browser::ActionOutcome::ok) throw Error("sim search: " + std::string(to_string(a.kind)) + " failed");
  }
  const auto count = agent::extract_count(obs, "inventory-item-name-*");
  return static_cast<double>(count.value_or(0));
}

json to_json(const MetamorphicReport& report) {
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    json j{{"case_id", o.case_id}};
    j["x_prime"] = o.x_prime ? to_json(*o.x_prime) : json();
    if (o.verdict) {
      j["holds"] = o.verdict->holds;
      j["y"] = to_json(o.verdict->y);
      j["y_prime"] = to_json(o.verdict->y_prime);
      j["explanation"] = o.verdict->explanation;
    }
    j["error"] = o.error ? json(*o.error) : json();
    outcomes.push_back(std::move(j));
  }
  return {{"schema", "aqua.metamorphic/1"},
          {"outcomes", outcomes},
          {"violations", report.violations},
          {"inconclusive", report.inconclusive}};
}

MetamorphicReport run_metamorphic_suite(const std::map<std::string, SutAdapter*>& adapters,
                                        std::span<const MetamorphicCase> cases, const SynonymTable& synonyms) {
  MetamorphicReport report;
  for (const auto& c : cases) {
    CaseOutcome o;
    o.case_id = c.id;
    try {
      const auto it = adapters.find(c.adapter);
      if (it == adapters.end() || !it->second) throw Error("unknown adapter '" + c.adapter + "'");
      o.x_prime = apply_transformation(c.x, c.transformation, c.seed, synonyms);
      const auto y = it->second->evaluate(c.x);
      const auto y_prime = it->second->evaluate(*o.x_prime);
      o.verdict = evaluate_relation(c.relation, y, y_prime);
      if (!o.verdict->holds) ++report.violations;
    } catch (const Error& e) {
      o.error = e.what();
      ++report.inconclusive;
    }
    report.outcomes.push_back(std::move(o));
  }
  return report;
}

MetamorphicSuite metamorphic_suite_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("cases") || !j.at("cases").is_array())
    throw SchemaError("cases", "suite needs a list of cases");
  MetamorphicSuite suite;
  const auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
    if (!j.contains(key)) return std::nullopt;
    return base_dir / j.at(key).get<std::string>();
  };
  suite.corpus = path_of("corpus");
  suite.synonyms = path_of("synonyms");
  suite.sim_fixture = path_of("sim_fixture");
  const auto& cases = j.at("cases");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto path = "cases[" + std::to_string(i) + "]";
    try {
      const auto& c = cases[i];
      MetamorphicCase mc;
      mc.id = c.at("id").get<std::string>();
      mc.x = value_from_json(c.at("input"));
      const auto& t = c.at("transformation");
      mc.transformation.kind = parse_transform_kind(t.at("kind").get<std::string>());
      mc.transformation.keyword = t.value("keyword", std::string{});
      mc.transformation.delta = t.value("delta", 0.0);
      mc.transformation.categories = t.value("categories", std::vector<std::string>{});
      mc.seed = c.value("seed", std::uint64_t{0});
      const auto& r = c.at("relation");
      mc.relation.kind = parse_relation_kind(r.at("kind").get<std::string>());
      mc.relation.domain = parse_output_domain(r.value("domain", std::string("numeric")));
      mc.relation.epsilon = r.value("epsilon", 0.0);
      mc.relation.strict = r.value("strict", true);
      mc.relation.validate();
      mc.adapter = c.at("adapter").get<std::string>();
      suite.cases.push_back(std::move(mc));
    } catch (const json::exception& e) {
      throw SchemaError(path, e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(path + "." + e.path(), e.reason());
    } catch (const ConfigError& e) {
      throw SchemaError(path + ".relation", e.what());
    }
  }
  return suite;
}

MetamorphicSuite load_metamorphic_suite(const std::filesystem::path& path) {
  const auto j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw SchemaError(path.filename().string(), "not valid JSON");
  return metamorphic_suite_from_json(j, path.parent_path());
}

}  // namespace aqua::quality
