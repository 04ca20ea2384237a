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

#include "aqua/browser/observation.hpp"

#include <algorithm>
#include <array>

#include "aqua/core/error.hpp"
#include "aqua/util/digest.hpp"

namespace aqua::browser {
namespace {

constexpr std::array<std::pair<ElementRole, std::string_view>, 7> kRoles{{
    {ElementRole::button, "button"},
    {ElementRole::input, "input"},
    {ElementRole::link, "link"},
    {ElementRole::text, "text"},
    {ElementRole::badge, "badge"},
    {ElementRole::option, "option"},
    {ElementRole::popup, "popup"},
}};

constexpr std::array<std::pair<ActionOutcome, std::string_view>, 4> kOutcomes{{
    {ActionOutcome::ok, "ok"},
    {ActionOutcome::element_not_found, "element_not_found"},
    {ActionOutcome::timeout, "timeout"},
    {ActionOutcome::popup_blocked, "popup_blocked"},
}};

template <typename Table, typename E>
std::string_view name_of(const Table& table, E value) {
  for (const auto& [v, name] : table)
    if (v == value) return name;
  return "?";
}

template <typename E, typename Table>
E value_of(const Table& table, std::string_view text, const char* what) {
  for (const auto& [v, name] : table)
    if (name == text) return v;
  throw SchemaError(what, "unknown value '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(ElementRole role) { return name_of(kRoles, role); }
ElementRole parse_element_role(std::string_view text) { return value_of<ElementRole>(kRoles, text, "role"); }
std::string_view to_string(ActionOutcome outcome) { return name_of(kOutcomes, outcome); }
ActionOutcome parse_action_outcome(std::string_view text) {
  return value_of<ActionOutcome>(kOutcomes, text, "outcome");
}

const Element* Observation::find(std::string_view selector) const {
  for (const auto& e : visible_elements)
    if (e.selector == selector) return &e;
  return nullptr;
}

std::string observation_digest(const Observation& obs) {
  std::vector<std::string> selectors;
  for (const auto& e : obs.visible_elements) selectors.push_back(e.selector);
  std::sort(selectors.begin(), selectors.end());
  std::string material = obs.url;
  material.push_back('\0');
  for (const auto& s : selectors) {
    material += s;
    material.push_back('\0');
  }
  material += obs.popup_present ? "popup" : "-";
  return sha256_hex(material);
}

nlohmann::json to_json(const Observation& obs) {
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : obs.visible_elements) {
    elements.push_back({{"selector", e.selector}, {"role", to_string(e.role)}, {"text", e.text}, {"value", e.value}});
  }
  return {{"url", obs.url},
          {"title", obs.title},
          {"visible_elements", elements},
          {"popup_present", obs.popup_present},
          {"last_outcome", to_string(obs.last_outcome)}};
}

Observation observation_from_json(const nlohmann::json& j) {
  try {
    Observation obs;
    obs.url = j.at("url").get<std::string>();
    obs.title = j.at("title").get<std::string>();
    for (const auto& e : j.at("visible_elements")) {
      obs.visible_elements.push_back({e.at("selector").get<std::string>(),
                                      parse_element_role(e.at("role").get<std::string>()),
                                      e.at("text").get<std::string>(), e.at("value").get<std::string>()});
    }
    obs.popup_present = j.at("popup_present").get<bool>();
    obs.last_outcome = parse_action_outcome(j.at("last_outcome").get<std::string>());
    return obs;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("observation", e.what());
  }
}

}  // namespace aqua::browser
