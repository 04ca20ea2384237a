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

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "aqua/llm/types.hpp"
#include "aqua/util/rational.hpp"

namespace aqua::llm {

// Monetary amount in USD, held exactly. Rendered with six fractional digits,
// rounded half-to-even.
struct Currency {
  Rational amount{0};

  std::string to_string() const { return format_fixed(amount, 6); }

  friend Currency operator+(Currency a, const Currency& b) { return {a.amount + b.amount}; }
  friend bool operator==(const Currency&, const Currency&) = default;
  friend auto operator<=>(const Currency& a, const Currency& b) {
    return a.amount < b.amount ? std::strong_ordering::less
           : a.amount == b.amount ? std::strong_ordering::equal
                                  : std::strong_ordering::greater;
  }
};

struct ModelRates {
  Rational input_per_1k{0};
  Rational output_per_1k{0};
};

struct RateTable {
  std::map<std::string, ModelRates> models;

  bool contains(const std::string& model) const { return models.count(model) > 0; }
};

class UnknownModelError : public Error {
 public:
  explicit UnknownModelError(const std::string& model) : Error("unknown model in rate table: " + model) {}
};

Currency estimate_cost(const Usage& usage, const std::string& model, const RateTable& rates);

// {"model": {"input_per_1k": "0.0025", "output_per_1k": "0.01"}, ...}; prices
// may be decimal strings or numbers and must be non-negative.
RateTable rate_table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RateTable& rates);

}  // namespace aqua::llm
