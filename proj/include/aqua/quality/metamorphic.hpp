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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/browser/sim.hpp"
#include "aqua/core/error.hpp"

namespace aqua::quality {

// Inputs and outputs are numbers or text. Categorical values are text drawn
// from a declared category set.
using Value = std::variant<double, std::string>;

std::string describe(const Value& v);
nlohmann::json to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

enum class RelationKind { invariance, increase, decrease };
enum class OutputDomain { numeric, discrete };

std::string_view to_string(RelationKind kind);
RelationKind parse_relation_kind(std::string_view text);
std::string_view to_string(OutputDomain domain);
OutputDomain parse_output_domain(std::string_view text);

struct MetamorphicRelation {
  RelationKind kind = RelationKind::invariance;
  OutputDomain domain = OutputDomain::numeric;
  double epsilon = 0.0;  // numeric invariance only
  // Increase and Decrease reject ties unless relaxed.
  bool strict = true;

  // Throws ConfigError on a negative epsilon, an epsilon outside numeric
  // invariance, or Increase/Decrease over a discrete domain.
  void validate() const;

  friend bool operator==(const MetamorphicRelation&, const MetamorphicRelation&) = default;
};

// y or y' does not belong to the relation's output domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

struct RelationVerdict {
  bool holds = false;
  Value y;
  Value y_prime;
  std::string explanation;

  friend bool operator==(const RelationVerdict&, const RelationVerdict&) = default;
};

RelationVerdict evaluate_relation(const MetamorphicRelation& relation, const Value& y, const Value& y_prime);

// One synonym group per line, words separated by commas; '#' starts a comment.
struct SynonymTable {
  std::vector<std::vector<std::string>> groups;

  static SynonymTable parse(std::string_view text);
  static SynonymTable load(const std::filesystem::path& path);
  // Other members of the word's group, case-insensitive.
  std::vector<std::string> synonyms_of(std::string_view word) const;
};

enum class TransformKind { identity, typo, synonym, restrictive_keyword, numeric_shift, categorical_switch };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view text);

struct Transformation {
  TransformKind kind = TransformKind::identity;
  std::string keyword;                  // restrictive_keyword
  double delta = 0.0;                   // numeric_shift, signed
  std::vector<std::string> categories;  // categorical_switch

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

class InapplicableTransformation : public Error {
 public:
  using Error::Error;
};

// Deterministic given the seed.
Value apply_transformation(const Value& x, const Transformation& t, std::uint64_t seed,
                           const SynonymTable& synonyms = {});

// The system under test seen through one measurable output.
class SutAdapter {
 public:
  virtual ~SutAdapter() = default;
  virtual Value evaluate(const Value& x) = 0;
  // False when calls must not overlap.
  virtual bool concurrent_safe() const { return true; }
};

struct CorpusRecord {
  std::string id;
  std::string title;
  std::string text;
};

std::vector<CorpusRecord> load_corpus_records(const std::filesystem::path& path);

// Number of records whose title or text contains every query word,
// case-insensitively. The planted bug drops the last word of multi-word
// queries.
class CorpusFilterAdapter final : public SutAdapter {
 public:
  explicit CorpusFilterAdapter(std::vector<CorpusRecord> records, bool drop_last_word = false);
  Value evaluate(const Value& x) override;

 private:
  std::vector<CorpusRecord> records_;
  bool drop_last_word_;
};

// Logs into a fresh sim session, types the query into the inventory search
// and counts the listed products.
class SimSearchAdapter final : public SutAdapter {
 public:
  explicit SimSearchAdapter(browser::SimFixture fixture);
  Value evaluate(const Value& x) override;
  bool concurrent_safe() const override { return true; }

 private:
  browser::SimFixture fixture_;
};

struct MetamorphicCase {
  std::string id;
  Value x;
  Transformation transformation;
  std::uint64_t seed = 0;
  MetamorphicRelation relation;
  std::string adapter;
};

struct CaseOutcome {
  std::string case_id;
  std::optional<Value> x_prime;
  std::optional<RelationVerdict> verdict;
  // Set when the case could not be evaluated.
  std::optional<std::string> error;
};

struct MetamorphicReport {
  std::vector<CaseOutcome> outcomes;
  int violations = 0;
  int inconclusive = 0;
};

nlohmann::json to_json(const MetamorphicReport& report);

// Evaluates every case with the adapter it names; a missing adapter or an
// adapter failure leaves that case inconclusive.
MetamorphicReport run_metamorphic_suite(const std::map<std::string, SutAdapter*>& adapters,
                                        std::span<const MetamorphicCase> cases, const SynonymTable& synonyms = {});

struct MetamorphicSuite {
  std::vector<MetamorphicCase> cases;
  // Resource paths resolved against the suite file's directory.
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> sim_fixture;
};

// Throws SchemaError on malformed documents.
MetamorphicSuite load_metamorphic_suite(const std::filesystem::path& path);
MetamorphicSuite metamorphic_suite_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

}  // namespace aqua::quality
