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

#include "aqua/llm/cost.hpp"

namespace aqua::llm {

Currency estimate_cost(const Usage& usage, const std::string& model, const RateTable& rates) {
  auto it = rates.models.find(model);
  if (it == rates.models.end()) throw UnknownModelError(model);
  const auto& r = it->second;
  return {Rational(usage.prompt_tokens, 1000) * r.input_per_1k +
          Rational(usage.completion_tokens, 1000) * r.output_per_1k};
}

namespace {

Rational price(const nlohmann::json& j, const std::string& path) {
  Rational out;
  if (j.is_string()) {
    out = parse_rational(j.get<std::string>());
  } else if (j.is_number()) {
    out = parse_rational(j.dump());
  } else {
    throw SchemaError(path, "expected a price");
  }
  if (out < 0) throw SchemaError(path, "price must be non-negative");
  return out;
}

}  // namespace

RateTable rate_table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("rates", "expected an object");
  RateTable table;
  for (const auto& [model, entry] : j.items()) {
    const auto path = "rates." + model;
    if (!entry.is_object()) throw SchemaError(path, "expected an object");
    if (!entry.contains("input_per_1k") || !entry.contains("output_per_1k")) {
      throw SchemaError(path, "input_per_1k and output_per_1k are required");
    }
    table.models[model] = {price(entry.at("input_per_1k"), path + ".input_per_1k"),
                           price(entry.at("output_per_1k"), path + ".output_per_1k")};
  }
  return table;
}

nlohmann::json to_json(const RateTable& rates) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [model, r] : rates.models) {
    out[model] = {{"input_per_1k", format_fixed(r.input_per_1k, 6)},
                  {"output_per_1k", format_fixed(r.output_per_1k, 6)}};
  }
  return out;
}

}  // namespace aqua::llm
