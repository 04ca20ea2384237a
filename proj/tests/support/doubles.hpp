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

#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/core/test_case_io.hpp"
#include "aqua/generation/generator.hpp"
#include "aqua/llm/client.hpp"
#include "aqua/llm/embedding.hpp"

namespace aqua::testing {

inline std::filesystem::path resource(const std::string& rel) {
  return std::filesystem::path(AQUA_RESOURCE_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline UserStory load_story(const std::string& name) {
  return parse_user_story(read_text(resource("fixtures/stories/" + name + ".json")));
}

inline TestCase load_flow(const std::string& name) {
  return parse_test_case(read_text(resource("fixtures/flows/" + name + ".json")));
}

inline std::string fenced(const TestCase& tc) { return "```json\n" + serialize_test_case(tc) + "```\n"; }

// Chat double driven by a callback; records every request.
class LambdaClient : public llm::ChatClient {
 public:
  using Handler = std::function<llm::ChatResponse(const llm::ChatRequest&)>;
  explicit LambdaClient(Handler handler) : handler_(std::move(handler)) {}

  llm::ChatResponse complete(const llm::ChatRequest& request) override {
    {
      std::lock_guard lock(mu_);
      requests.push_back(request);
    }
    return handler_(request);
  }

  std::vector<llm::Embedding> embed(std::span<const std::string> texts) override {
    std::vector<llm::Embedding> out;
    for (const auto& t : texts) out.push_back(llm::stub_embedding(t));
    return out;
  }

  std::vector<llm::ChatRequest> requests;

 private:
  Handler handler_;
  std::mutex mu_;
};

// Judge reply confirming every case's own ac_refs and finding no issue.
inline std::string echo_judge_reply(const llm::ChatRequest& request) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& block : generation::extract_fenced_blocks(request.messages.front().content)) {
    const auto tc = parse_test_case(block);
    cases.push_back({{"id", tc.id}, {"valid", true}, {"issues", nlohmann::json::array()}, {"ac_refs_confirmed", tc.ac_refs}});
  }
  return "```json\n" + nlohmann::json{{"cases", cases}}.dump() + "\n```";
}

}  // namespace aqua::testing
