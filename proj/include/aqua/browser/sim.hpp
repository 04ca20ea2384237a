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
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "aqua/browser/session.hpp"
#include "aqua/util/rational.hpp"

namespace aqua::browser {

struct Product {
  std::string name;
  Rational price;

  friend bool operator==(const Product&, const Product&) = default;
};

struct FaultPlan {
  double popup_probability = 0.0;
  int action_delay_min_ms = 0;
  int action_delay_max_ms = 0;
  // Actions whose sampled delay exceeds this time out without effect.
  std::optional<int> action_timeout_ms;
  std::uint64_t rng_seed = 0;

  friend bool operator==(const FaultPlan&, const FaultPlan&) = default;
};

struct SimFixture {
  std::map<std::string, std::string> users;
  std::vector<Product> catalog;
  FaultPlan fault_plan;

  // standard_user/secret_sauce and the Backpack, Bike Light, T-Shirt catalog.
  static SimFixture standard();
  // Throws SchemaError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const SimFixture&, const SimFixture&) = default;
};

nlohmann::json to_json(const SimFixture& fixture);
SimFixture sim_fixture_from_json(const nlohmann::json& j);
SimFixture load_sim_fixture(const std::filesystem::path& path);

enum class Page { login, inventory, cart, checkout_info, checkout_overview, checkout_complete };
enum class SortMode { name_asc, name_desc, price_asc, price_desc };

std::string_view to_string(Page page);
std::string_view page_path(Page page);
std::string_view to_string(SortMode mode);
// Accepts the mode names and the short forms az, za, lohi, hilo.
std::optional<SortMode> parse_sort_mode(std::string_view text);

struct CheckoutFields {
  std::string first;
  std::string last;
  std::string zip;

  friend bool operator==(const CheckoutFields&, const CheckoutFields&) = default;
};

struct SimState {
  Page page = Page::login;
  std::optional<std::string> session_user;
  SortMode sort_mode = SortMode::name_asc;
  std::multiset<std::string> cart;
  CheckoutFields checkout_fields;
  std::optional<std::string> error_banner;
  bool popup_active = false;
  // Login form contents and the inventory search query.
  std::string typed_username;
  std::string typed_password;
  std::string search_query;

  friend bool operator==(const SimState&, const SimState&) = default;
};

nlohmann::json to_json(const SimState& state);

std::string product_slug(std::string_view name);

// The store as a pure state machine, without faults.
class SimApp {
 public:
  explicit SimApp(SimFixture fixture);

  const SimFixture& fixture() const noexcept { return fixture_; }
  Observation observe(const SimState& state, ActionOutcome outcome = ActionOutcome::ok) const;
  ActionOutcome step(SimState& state, const Action& action) const;

  // Catalog in display order for the state's sort mode and search query.
  std::vector<Product> visible_products(const SimState& state) const;

 private:
  ActionOutcome navigate(SimState& state, std::string_view url) const;
  ActionOutcome click(SimState& state, std::string_view target) const;
  ActionOutcome type(SimState& state, std::string_view target, const std::string& value) const;
  const Product* product_by_slug(std::string_view slug) const;

  SimFixture fixture_;
};

// Simulated browser session: the state machine plus the fault plan. The
// popup decision is drawn once per session; when it fires, the popup appears
// before action 1, 2 or 3 and blocks everything but dismiss_popup.
class SimSession : public BrowserSession {
 public:
  SimSession(SimFixture fixture, std::uint64_t seed);

  Observation apply(const Action& action) override;
  Observation snapshot() override;
  std::chrono::milliseconds last_action_duration() const override { return last_duration_; }

  const SimState& state() const noexcept { return state_; }
  bool popup_scheduled() const noexcept { return popup_at_ > 0; }

 private:
  SimApp app_;
  SimState state_;
  std::mt19937_64 rng_;
  int popup_at_ = 0;
  int actions_ = 0;
  ActionOutcome last_outcome_ = ActionOutcome::ok;
  std::chrono::milliseconds last_duration_{0};
};

std::unique_ptr<SimSession> open_sim_session(const SimFixture& fixture, std::optional<std::uint64_t> seed = {});

struct OracleResult {
  SimState state;
  // Why execution stopped early: an outcome other than ok or a new error banner.
  std::optional<std::string> error;
};

// Runs the plan on the fault-free state machine and stops at the first
// failing action.
OracleResult oracle_run(std::span<const Action> plan, const SimFixture& fixture);

}  // namespace aqua::browser
