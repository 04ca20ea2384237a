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

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/browser/session.hpp"
#include "aqua/net/transport.hpp"

namespace aqua::browser {

struct WebDriverConfig {
  std::string endpoint = "http://127.0.0.1:4444";
  // Prefix for navigate values that are paths rather than URLs.
  std::string base_url = "https://www.saucedemo.com";
  std::string browser_name = "chrome";
  std::chrono::milliseconds timeout{30000};
  // Elements reported in each observation, in this order.
  std::vector<std::string> watched_selectors;
  std::string popup_selector = "popup-close";
};

// A bare token such as "login-button" becomes a CSS selector list matching
// the id, data-test or name attribute; anything else is used as CSS.
std::string css_for(const std::string& target);

// A W3C command answered with an error object.
class WebDriverCommandError : public BrowserError {
 public:
  WebDriverCommandError(std::string code, std::string message)
      : BrowserError(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Browser session over the W3C WebDriver protocol. Uses new session,
// navigate, current URL, title, find element (also from an element), click,
// clear, send keys, get text, back and delete session.
class WebDriverSession : public BrowserSession {
 public:
  // Opens the remote session; throws BrowserError naming the endpoint when it
  // cannot be reached.
  WebDriverSession(WebDriverConfig config, std::shared_ptr<net::HttpTransport> transport);
  ~WebDriverSession() override;

  Observation apply(const Action& action) override;
  Observation snapshot() override;
  std::chrono::milliseconds last_action_duration() const override { return last_duration_; }
  void close() override;

  const std::string& session_id() const noexcept { return session_id_; }
  // Adds selectors to the observation watch list.
  void watch(const std::vector<std::string>& selectors);

 private:
  nlohmann::json command(net::Method method, const std::string& path, const nlohmann::json& body = nullptr);
  std::optional<std::string> find(const std::string& target);
  void perform(const Action& action);

  WebDriverConfig config_;
  std::shared_ptr<net::HttpTransport> transport_;
  std::string session_id_;
  ActionOutcome last_outcome_ = ActionOutcome::ok;
  std::chrono::milliseconds last_duration_{0};
};

}  // namespace aqua::browser
