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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace aqua::browser {

enum class ElementRole { button, input, link, text, badge, option, popup };
enum class ActionOutcome { ok, element_not_found, timeout, popup_blocked };

std::string_view to_string(ElementRole role);
ElementRole parse_element_role(std::string_view text);
std::string_view to_string(ActionOutcome outcome);
ActionOutcome parse_action_outcome(std::string_view text);

struct Element {
  std::string selector;
  ElementRole role = ElementRole::text;
  std::string text;
  std::string value;

  friend bool operator==(const Element&, const Element&) = default;
};

struct Observation {
  std::string url;
  std::string title;
  std::vector<Element> visible_elements;
  bool popup_present = false;
  ActionOutcome last_outcome = ActionOutcome::ok;

  const Element* find(std::string_view selector) const;

  friend bool operator==(const Observation&, const Observation&) = default;
};

// SHA-256 over the url, the sorted visible selectors and popup presence.
// Texts and values are deliberately left out.
std::string observation_digest(const Observation& obs);

nlohmann::json to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

}  // namespace aqua::browser
