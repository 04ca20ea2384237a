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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/agent/guardrails.hpp"
#include "aqua/browser/webdriver.hpp"
#include "aqua/llm/cost.hpp"
#include "aqua/llm/http_client.hpp"
#include "aqua/retrieval/store.hpp"

namespace aqua::cli {

namespace fs = std::filesystem;

// Where the bundled fixtures live; relative config paths never use it.
fs::path resource_dir();

struct ProviderSettings {
  // "auto" uses the HTTP provider when its credential variable is set and
  // the scripted transcript otherwise; "http" and "scripted" force one.
  std::string kind = "auto";
  llm::ProviderConfig http;
  fs::path transcript;
};

struct ModelSettings {
  std::string generator = "generator";
  std::string judge = "judge";
  std::string planner = "planner";
  std::string executor = "executor";
};

struct RetrievalSettings {
  std::size_t k = 4;
  double theta = 0.92;
  std::int64_t token_budget = 1500;
  retrieval::ChunkingConfig chunking;
  std::optional<fs::path> context_dir;
};

struct ExecutionSettings {
  std::optional<std::string> target;  // "sim" or a URL
  std::optional<int> repeat;
  fs::path sim_fixture;
  browser::WebDriverConfig webdriver;
  // "auto" (provider when credentials exist, honest stub otherwise), "llm",
  // "honest", "naive" or "corrective".
  std::string agent = "auto";
  std::optional<fs::path> agent_transcript;
  // Empty: one set built from the planner and executor models.
  std::vector<agent::ModelRoles> role_sets;
};

// Optional members are the values a command flag can override.
struct Config {
  fs::path base_dir = ".";
  ProviderSettings provider;
  ModelSettings models;
  llm::RateTable rates;
  agent::GuardrailConfig guardrails;
  RetrievalSettings retrieval;
  ExecutionSettings execution;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> kinds;
  std::optional<fs::path> output_dir;
  std::optional<fs::path> prompts_dir;
  int concurrency = 4;

  std::vector<agent::ModelRoles> role_sets() const;
};

// Relative paths resolve against `base_dir`. Throws ConfigError on unknown
// keys, bad values or any inline credential.
Config config_from_json(const nlohmann::json& j, const fs::path& base_dir);
Config load_config(const fs::path& path);

// Built-in defaults, bundled fixtures included.
Config default_config();

template <class T>
T pick(const std::optional<T>& flag, const std::optional<T>& configured, T fallback) {
  if (flag) return *flag;
  if (configured) return *configured;
  return fallback;
}

}  // namespace aqua::cli
