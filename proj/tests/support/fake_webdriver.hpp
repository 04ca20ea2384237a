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
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "aqua/browser/sim.hpp"

namespace aqua::testing {

// Minimal W3C WebDriver server whose browser is the simulated store.
// Elements are addressed by their sim selector.
class FakeWebDriver {
 public:
  explicit FakeWebDriver(browser::SimFixture fixture, std::uint64_t seed = 0)
      : fixture_(std::move(fixture)), seed_(seed) {
    routes();
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeWebDriver() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::size_t open_sessions() {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }
  static constexpr const char* kBase = "http://fake.shop";

 private:
  using json = nlohmann::json;
  static constexpr const char* kKey = "element-6066-11e4-a52f-4a5a9b8f9b6c";

  static void reply(httplib::Response& res, const json& value, int status = 200) {
    res.status = status;
    res.set_content(json{{"value", value}}.dump(), "application/json");
  }
  static void fail(httplib::Response& res, int status, const std::string& code, const std::string& msg = {}) {
    reply(res, {{"error", code}, {"message", msg}}, status);
  }

  static std::string token_of(const std::string& css) {
    if (css.starts_with("#")) return css.substr(1, css.find(',') - 1);
    return css;
  }

  void outcome_reply(httplib::Response& res, const browser::Observation& obs) {
    switch (obs.last_outcome) {
      case browser::ActionOutcome::ok: return reply(res, nullptr);
      case browser::ActionOutcome::element_not_found: return fail(res, 404, "no such element");
      case browser::ActionOutcome::popup_blocked: return fail(res, 400, "element click intercepted");
      case browser::ActionOutcome::timeout: return fail(res, 500, "timeout");
    }
  }

  // Runs `fn` with the session named in the path, or answers 404.
  template <typename Fn>
  auto with_session(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      auto it = sessions_.find(req.matches[1]);
      if (it == sessions_.end()) return fail(res, 404, "invalid session id");
      fn(*it->second, req, res);
    };
  }

  void routes() {
    server_.Post("/session", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard lock(mu_);
      const auto id = "s" + std::to_string(++next_);
      sessions_[id] = browser::open_sim_session(fixture_, seed_ + next_);
      reply(res, {{"sessionId", id}, {"capabilities", json::object()}});
    });
    server_.Delete(R"(/session/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      sessions_.erase(req.matches[1]);
      reply(res, nullptr);
    });
    server_.Post(R"(/session/([^/]+)/url)", with_session([this](auto& s, const auto& req, auto& res) {
      outcome_reply(res, s.apply({ActionKind::navigate, "", json::parse(req.body).at("url").template get<std::string>()}));
    }));
    server_.Get(R"(/session/([^/]+)/url)", with_session([](auto& s, const auto&, auto& res) {
      reply(res, std::string(kBase) + s.snapshot().url);
    }));
    server_.Get(R"(/session/([^/]+)/title)", with_session([](auto& s, const auto&, auto& res) {
      reply(res, s.snapshot().title);
    }));
    server_.Post(R"(/session/([^/]+)/back)", with_session([this](auto& s, const auto&, auto& res) {
      outcome_reply(res, s.apply({ActionKind::go_back, "", std::nullopt}));
    }));
    server_.Post(R"(/session/([^/]+)/element)", with_session([](auto& s, const auto& req, auto& res) {
      const auto token = token_of(json::parse(req.body).at("value").template get<std::string>());
      if (!s.snapshot().find(token)) return fail(res, 404, "no such element", token);
      reply(res, {{kKey, token}});
    }));
    server_.Post(R"(/session/([^/]+)/element/([^/]+)/element)", with_session([](auto&, const auto& req, auto& res) {
      const auto css = json::parse(req.body).at("value").template get<std::string>();
      const auto open = css.find("value=\"") + 7;
      reply(res, {{kKey, "opt|" + std::string(req.matches[2]) + "|" + css.substr(open, css.rfind('"') - open)}});
    }));
    server_.Post(R"(/session/([^/]+)/element/([^/]+)/click)", with_session([this](auto& s, const auto& req, auto& res) {
      const std::string id = req.matches[2];
      if (id.starts_with("opt|")) {
        const auto bar = id.find('|', 4);
        return outcome_reply(res, s.apply({ActionKind::select_option, id.substr(4, bar - 4), id.substr(bar + 1)}));
      }
      outcome_reply(res, s.apply({ActionKind::click, id, std::nullopt}));
    }));
    server_.Post(R"(/session/([^/]+)/element/([^/]+)/clear)", with_session([](auto&, const auto&, auto& res) {
      reply(res, nullptr);
    }));
    server_.Post(R"(/session/([^/]+)/element/([^/]+)/value)", with_session([this](auto& s, const auto& req, auto& res) {
      outcome_reply(res, s.apply({ActionKind::type_text, std::string(req.matches[2]),
                                  json::parse(req.body).at("text").template get<std::string>()}));
    }));
    server_.Get(R"(/session/([^/]+)/element/([^/]+)/text)", with_session([](auto& s, const auto& req, auto& res) {
      const auto obs = s.snapshot();
      const auto* e = obs.find(std::string(req.matches[2]));
      if (!e) return fail(res, 404, "stale element reference");
      reply(res, e->text);
    }));
  }

  browser::SimFixture fixture_;
  std::uint64_t seed_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mu_;
  int next_ = 0;
  std::map<std::string, std::unique_ptr<browser::SimSession>> sessions_;
};

}  // namespace aqua::testing
