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

#include "aqua/browser/webdriver.hpp"

#include <algorithm>

namespace aqua::browser {
namespace {

constexpr const char* kElementKey = "element-6066-11e4-a52f-4a5a9b8f9b6c";

bool is_bare_token(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
  });
}

std::string element_id(const nlohmann::json& value) {
  if (!value.is_object() || !value.contains(kElementKey)) throw BrowserError("WebDriver: malformed element reference");
  return value[kElementKey].get<std::string>();
}

}  // namespace

std::string css_for(const std::string& target) {
  if (!is_bare_token(target)) return target;
  return "#" + target + ", [data-test=\"" + target + "\"], [name=\"" + target + "\"]";
}

WebDriverSession::WebDriverSession(WebDriverConfig config, std::shared_ptr<net::HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  nlohmann::json caps{{"capabilities", {{"alwaysMatch", {{"browserName", config_.browser_name}}}}}};
  const auto value = command(net::Method::post, "/session", caps);
  if (!value.is_object() || !value.contains("sessionId")) throw BrowserError("WebDriver: new session reply has no sessionId");
  session_id_ = value["sessionId"].get<std::string>();
}

WebDriverSession::~WebDriverSession() {
  try {
    close();
  } catch (...) {
  }
}

void WebDriverSession::watch(const std::vector<std::string>& selectors) {
  for (const auto& s : selectors)
    if (std::find(config_.watched_selectors.begin(), config_.watched_selectors.end(), s) == config_.watched_selectors.end())
      config_.watched_selectors.push_back(s);
}

nlohmann::json WebDriverSession::command(net::Method method, const std::string& path, const nlohmann::json& body) {
  net::HttpRequest req;
  req.method = method;
  req.url = config_.endpoint + path;
  req.timeout = config_.timeout;
  req.headers["Content-Type"] = "application/json";
  if (method == net::Method::post) req.body = body.is_null() ? "{}" : body.dump();
  net::HttpResponse resp;
  try {
    resp = transport_->send(req);
  } catch (const net::TransportError& e) {
    throw BrowserError("cannot reach WebDriver endpoint " + config_.endpoint + ": " + e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(resp.body.empty() ? "{}" : resp.body);
  } catch (const nlohmann::json::parse_error&) {
    throw BrowserError("WebDriver: non-JSON reply from " + req.url);
  }
  const auto value = j.value("value", nlohmann::json());
  if (resp.status != 200) {
    if (value.is_object() && value.contains("error"))
      throw WebDriverCommandError(value["error"].get<std::string>(), value.value("message", ""));
    throw BrowserError("WebDriver: HTTP " + std::to_string(resp.status) + " from " + req.url);
  }
  return value;
}

std::optional<std::string> WebDriverSession::find(const std::string& target) {
  try {
    return element_id(command(net::Method::post, "/session/" + session_id_ + "/element",
                              {{"using", "css selector"}, {"value", css_for(target)}}));
  } catch (const WebDriverCommandError& e) {
    if (e.code() == "no such element") return std::nullopt;
    throw;
  }
}

void WebDriverSession::perform(const Action& action) {
  const auto base = "/session/" + session_id_;
  const auto value = action.value.value_or("");
  auto require = [&](const std::string& target) {
    auto id = find(target);
    if (!id) throw WebDriverCommandError("no such element", target);
    return base + "/element/" + *id;
  };
  switch (action.kind) {
    case ActionKind::navigate: {
      const auto url = value.find("://") != std::string::npos ? value : config_.base_url + value;
      command(net::Method::post, base + "/url", {{"url", url}});
      break;
    }
    case ActionKind::click:
      command(net::Method::post, require(action.target) + "/click");
      break;
    case ActionKind::type_text: {
      const auto el = require(action.target);
      command(net::Method::post, el + "/clear");
      command(net::Method::post, el + "/value", {{"text", value}});
      break;
    }
    case ActionKind::select_option: {
      const auto el = require(action.target);
      const auto option = element_id(command(net::Method::post, el + "/element",
                                             {{"using", "css selector"}, {"value", "option[value=\"" + value + "\"]"}}));
      command(net::Method::post, base + "/element/" + option + "/click");
      break;
    }
    case ActionKind::read:
    case ActionKind::assert_visible:
      command(net::Method::get, require(action.target) + "/text");
      break;
    case ActionKind::dismiss_popup: {
      const auto target = action.target.empty() ? config_.popup_selector : action.target;
      if (auto id = find(target)) command(net::Method::post, base + "/element/" + *id + "/click");
      break;
    }
    case ActionKind::go_back:
      command(net::Method::post, base + "/back");
      break;
    case ActionKind::emit_verdict:
      break;
  }
}

Observation WebDriverSession::apply(const Action& action) {
  const auto start = std::chrono::steady_clock::now();
  try {
    perform(action);
    last_outcome_ = ActionOutcome::ok;
  } catch (const WebDriverCommandError& e) {
    if (e.code() == "no such element" || e.code() == "element not interactable" || e.code() == "stale element reference")
      last_outcome_ = ActionOutcome::element_not_found;
    else if (e.code() == "element click intercepted")
      last_outcome_ = ActionOutcome::popup_blocked;
    else if (e.code() == "timeout" || e.code() == "script timeout")
      last_outcome_ = ActionOutcome::timeout;
    else
      throw;
  }
  last_duration_ = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  return snapshot();
}

Observation WebDriverSession::snapshot() {
  const auto base = "/session/" + session_id_;
  Observation obs;
  obs.url = command(net::Method::get, base + "/url").get<std::string>();
  obs.title = command(net::Method::get, base + "/title").get<std::string>();
  obs.last_outcome = last_outcome_;
  auto selectors = config_.watched_selectors;
  if (std::find(selectors.begin(), selectors.end(), config_.popup_selector) == selectors.end())
    selectors.push_back(config_.popup_selector);
  for (const auto& selector : selectors) {
    const auto id = find(selector);
    if (!id) continue;
    std::string text;
    try {
      text = command(net::Method::get, base + "/element/" + *id + "/text").get<std::string>();
    } catch (const WebDriverCommandError&) {
      continue;
    }
    const bool popup = selector == config_.popup_selector;
    obs.visible_elements.push_back({selector, popup ? ElementRole::popup : ElementRole::text, text, {}});
    if (popup) obs.popup_present = true;
  }
  return obs;
}

void WebDriverSession::close() {
  if (session_id_.empty()) return;
  const auto id = std::exchange(session_id_, {});
  command(net::Method::del, "/session/" + id);
}

}  // namespace aqua::browser
