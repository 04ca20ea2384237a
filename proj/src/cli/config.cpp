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

#include "aqua/cli/config.hpp"

#include <algorithm>
#include <set>

#include "aqua/core/test_case_io.hpp"

namespace aqua::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kCredentialKeys{"api_key", "apikey", "key", "secret", "token", "password", "authorization",
                                            "credential", "credentials", "bearer"};

class Reader {
 public:
  Reader(const json& j, std::string path, const fs::path& base) : j_(j), path_(std::move(path)), base_(base) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  // Call after every field was read.
  void finish(std::initializer_list<std::string_view> known) const {
    for (const auto& [key, value] : j_.items()) {
      std::string lowered = key;
      std::transform(lowered.begin(), lowered.end(), lowered.begin(), [](unsigned char c) { return std::tolower(c); });
      if (kCredentialKeys.count(lowered))
        fail(at(key), "credentials are read from the environment variable named by credential_env_var only");
      if (std::find(known.begin(), known.end(), key) == known.end()) fail(at(key), "unknown key");
    }
  }

  const json* find(const std::string& key) const {
    auto it = j_.find(key);
    return it == j_.end() || it->is_null() ? nullptr : &*it;
  }

  template <class T>
  std::optional<T> get(const std::string& key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    try {
      return v->get<T>();
    } catch (const json::exception&) {
      fail(at(key), "has the wrong type");
    }
  }

  std::optional<std::string> text(const std::string& key) const {
    auto v = get<std::string>(key);
    if (v && v->empty()) fail(at(key), "must not be empty");
    return v;
  }

  template <class T>
  std::optional<T> positive(const std::string& key) const {
    const auto* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() || v->get<std::int64_t>() <= 0) fail(at(key), "must be a positive integer");
    return static_cast<T>(v->get<std::int64_t>());
  }

  std::optional<fs::path> path(const std::string& key) const {
    auto v = text(key);
    if (!v) return std::nullopt;
    fs::path p(*v);
    return p.is_absolute() ? p : (base_ / p).lexically_normal();
  }

  Reader child(const std::string& key) const { return Reader(*find(key), at(key), base_); }
  const fs::path& base() const { return base_; }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] static void fail(const std::string& where, const std::string& why) {
    throw ConfigError(where + ": " + why);
  }

 private:
  const json& j_;
  std::string path_;
  const fs::path& base_;
};

void read_provider(const Reader& r, ProviderSettings& p) {
  if (auto v = r.text("kind")) {
    if (*v != "auto" && *v != "http" && *v != "scripted") Reader::fail(r.at("kind"), "must be auto, http or scripted");
    p.kind = *v;
  }
  if (auto v = r.text("base_url")) p.http.base_url = *v;
  if (auto v = r.text("credential_env_var")) p.http.credential_env_var = *v;
  if (auto v = r.positive<int>("timeout_seconds")) p.http.timeout = std::chrono::seconds(*v);
  if (auto v = r.positive<int>("max_attempts")) p.http.retry.max_attempts = *v;
  if (auto v = r.text("embedding_model")) p.http.embedding_model = *v;
  if (auto v = r.positive<int>("max_concurrent_requests")) p.http.max_concurrent_requests = *v;
  if (auto v = r.path("transcript")) p.transcript = *v;
  r.finish({"kind", "base_url", "credential_env_var", "timeout_seconds", "max_attempts", "embedding_model",
            "max_concurrent_requests", "transcript"});
}

void read_models(const Reader& r, ModelSettings& m) {
  if (auto v = r.text("generator")) m.generator = *v;
  if (auto v = r.text("judge")) m.judge = *v;
  if (auto v = r.text("planner")) m.planner = *v;
  if (auto v = r.text("executor")) m.executor = *v;
  r.finish({"generator", "judge", "planner", "executor"});
}

void read_guardrails(const Reader& r, agent::GuardrailConfig& g) {
  if (auto v = r.positive<std::int64_t>("max_total_tokens")) g.max_total_tokens = *v;
  if (auto v = r.positive<std::int64_t>("max_wall_seconds")) g.max_wall_seconds = *v;
  if (auto v = r.positive<int>("max_steps")) g.max_steps = *v;
  if (auto v = r.positive<int>("loop_window")) g.loop_window = *v;
  if (auto v = r.positive<int>("loop_repeat")) g.loop_repeat = *v;
  r.finish({"max_total_tokens", "max_wall_seconds", "max_steps", "loop_window", "loop_repeat"});
  g.validate();
}

void read_retrieval(const Reader& r, RetrievalSettings& s) {
  if (auto v = r.positive<std::size_t>("k")) s.k = *v;
  if (auto v = r.get<double>("theta")) {
    if (*v <= 0.0 || *v > 1.0) Reader::fail(r.at("theta"), "must lie in (0, 1]");
    s.theta = *v;
  }
  if (auto v = r.positive<std::int64_t>("token_budget")) s.token_budget = *v;
  if (auto v = r.positive<std::size_t>("chunk_chars")) s.chunking.target_chars = *v;
  if (auto v = r.get<std::size_t>("chunk_overlap")) s.chunking.overlap_chars = *v;
  if (s.chunking.overlap_chars >= s.chunking.target_chars)
    Reader::fail(r.at("chunk_overlap"), "must be smaller than chunk_chars");
  if (auto v = r.path("context_dir")) s.context_dir = *v;
  r.finish({"k", "theta", "token_budget", "chunk_chars", "chunk_overlap", "context_dir"});
}

void read_execution(const Reader& r, ExecutionSettings& e) {
  if (auto v = r.text("target")) e.target = *v;
  if (auto v = r.positive<int>("repeat")) e.repeat = *v;
  if (auto v = r.path("sim_fixture")) e.sim_fixture = *v;
  if (r.find("webdriver")) {
    const auto w = r.child("webdriver");
    if (auto v = w.text("endpoint")) e.webdriver.endpoint = *v;
    if (auto v = w.text("browser_name")) e.webdriver.browser_name = *v;
    if (auto v = w.positive<int>("timeout_ms")) e.webdriver.timeout = std::chrono::milliseconds(*v);
    w.finish({"endpoint", "browser_name", "timeout_ms"});
  }
  if (auto v = r.text("agent")) {
    static const std::set<std::string> kinds{"auto", "llm", "honest", "naive", "corrective"};
    if (!kinds.count(*v)) Reader::fail(r.at("agent"), "must be auto, llm, honest, naive or corrective");
    e.agent = *v;
  }
  if (auto v = r.path("agent_transcript")) e.agent_transcript = *v;
  if (const auto* sets = r.find("role_sets")) {
    if (!sets->is_array() || sets->empty()) Reader::fail(r.at("role_sets"), "must be a non-empty array");
    for (std::size_t i = 0; i < sets->size(); ++i) {
      const Reader s((*sets)[i], r.at("role_sets[" + std::to_string(i) + "]"), r.base());
      auto planner = s.text("planner");
      auto executor = s.text("executor");
      if (!planner) Reader::fail(s.at("planner"), "is required");
      e.role_sets.push_back({*planner, executor.value_or(*planner)});
      s.finish({"planner", "executor"});
    }
  }
  r.finish({"target", "repeat", "sim_fixture", "webdriver", "agent", "agent_transcript", "role_sets"});
}

}  // namespace

fs::path resource_dir() { return fs::path(AQUA_RESOURCE_DIR); }

std::vector<agent::ModelRoles> Config::role_sets() const {
  if (!execution.role_sets.empty()) return execution.role_sets;
  return {{models.planner, models.executor}};
}

Config default_config() {
  Config c;
  c.provider.transcript = resource_dir() / "fixtures/transcripts/generation.json";
  c.execution.sim_fixture = resource_dir() / "fixtures/sim/store.json";
  return c;
}

Config config_from_json(const json& j, const fs::path& base_dir) {
  Config c = default_config();
  c.base_dir = base_dir;
  const Reader r(j, "", base_dir);
  if (r.find("provider")) read_provider(r.child("provider"), c.provider);
  if (r.find("models")) read_models(r.child("models"), c.models);
  if (const auto* rates = r.find("rates")) {
    try {
      c.rates = llm::rate_table_from_json(*rates);
    } catch (const Error& e) {
      Reader::fail("rates", e.what());
    }
  }
  if (r.find("guardrails")) read_guardrails(r.child("guardrails"), c.guardrails);
  if (r.find("retrieval")) read_retrieval(r.child("retrieval"), c.retrieval);
  if (r.find("execution")) read_execution(r.child("execution"), c.execution);
  if (r.find("generation")) {
    const auto g = r.child("generation");
    c.max_iter = g.positive<int>("max_iter");
    g.finish({"max_iter"});
  }
  if (r.find("mutation")) {
    const auto m = r.child("mutation");
    c.kinds = m.text("kinds");
    c.seed = m.get<std::uint64_t>("seed");
    m.finish({"kinds", "seed"});
  }
  c.output_dir = r.path("output_dir");
  c.prompts_dir = r.path("prompts_dir");
  if (auto v = r.positive<int>("concurrency")) c.concurrency = *v;
  r.finish({"provider", "models", "rates", "guardrails", "retrieval", "execution", "generation", "mutation",
            "output_dir", "prompts_dir", "concurrency"});
  return c;
}

Config load_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  auto base = fs::absolute(path).parent_path();
  return config_from_json(j, base);
}

}  // namespace aqua::cli
