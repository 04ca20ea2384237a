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

#include "aqua/browser/sim.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace aqua::browser {
namespace {

constexpr std::string_view kTitle = "Swag Labs";
constexpr std::string_view kPopupText = "Subscribe to our newsletter";

constexpr std::array<std::pair<Page, std::string_view>, 6> kPages{{
    {Page::login, "/"},
    {Page::inventory, "/inventory.html"},
    {Page::cart, "/cart.html"},
    {Page::checkout_info, "/checkout-step-one.html"},
    {Page::checkout_overview, "/checkout-step-two.html"},
    {Page::checkout_complete, "/checkout-complete.html"},
}};

constexpr std::array<std::pair<SortMode, std::string_view>, 4> kSortLabels{{
    {SortMode::name_asc, "Name (A to Z)"},
    {SortMode::name_desc, "Name (Z to A)"},
    {SortMode::price_asc, "Price (low to high)"},
    {SortMode::price_desc, "Price (high to low)"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string price_text(const Rational& r) { return format_fixed(r, 2); }

std::string url_path(std::string_view url) {
  if (const auto scheme = url.find("://"); scheme != std::string_view::npos) {
    const auto slash = url.find('/', scheme + 3);
    url = slash == std::string_view::npos ? std::string_view("/") : url.substr(slash);
  }
  if (const auto cut = url.find_first_of("?#"); cut != std::string_view::npos) url = url.substr(0, cut);
  if (url.empty()) return "/";
  std::string path(url);
  if (path.front() != '/') path.insert(path.begin(), '/');
  return path;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::optional<std::string> checkout_field_error(const CheckoutFields& f) {
  if (f.first.empty()) return "Error: First Name is required";
  if (f.last.empty()) return "Error: Last Name is required";
  if (f.zip.empty()) return "Error: Postal Code is required";
  if (!all_digits(f.zip)) return "Error: Postal Code must contain digits only";
  return std::nullopt;
}

void go_to(SimState& state, Page page) {
  state.page = page;
  state.error_banner.reset();
}

}  // namespace

std::string_view to_string(Page page) {
  switch (page) {
    case Page::login: return "login";
    case Page::inventory: return "inventory";
    case Page::cart: return "cart";
    case Page::checkout_info: return "checkout_info";
    case Page::checkout_overview: return "checkout_overview";
    case Page::checkout_complete: return "checkout_complete";
  }
  return "login";
}

std::string_view page_path(Page page) {
  for (const auto& [p, path] : kPages)
    if (p == page) return path;
  return "/";
}

std::string_view to_string(SortMode mode) {
  switch (mode) {
    case SortMode::name_asc: return "name_asc";
    case SortMode::name_desc: return "name_desc";
    case SortMode::price_asc: return "price_asc";
    case SortMode::price_desc: return "price_desc";
  }
  return "name_asc";
}

std::optional<SortMode> parse_sort_mode(std::string_view text) {
  static constexpr std::array<std::pair<std::string_view, SortMode>, 8> kNames{{
      {"name_asc", SortMode::name_asc},
      {"name_desc", SortMode::name_desc},
      {"price_asc", SortMode::price_asc},
      {"price_desc", SortMode::price_desc},
      {"az", SortMode::name_asc},
      {"za", SortMode::name_desc},
      {"lohi", SortMode::price_asc},
      {"hilo", SortMode::price_desc},
  }};
  for (const auto& [name, mode] : kNames)
    if (name == text) return mode;
  return std::nullopt;
}

std::string product_slug(std::string_view name) {
  std::string slug;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (!slug.empty() && slug.back() != '-')
      slug.push_back('-');
  }
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  return slug;
}

SimFixture SimFixture::standard() {
  SimFixture f;
  f.users = {{"standard_user", "secret_sauce"}};
  f.catalog = {{"Backpack", Rational(2999, 100)}, {"Bike Light", Rational(999, 100)}, {"T-Shirt", Rational(1599, 100)}};
  return f;
}

void SimFixture::validate() const {
  if (auto it = users.find("standard_user"); it == users.end() || it->second != "secret_sauce")
    throw SchemaError("users", "must map standard_user to secret_sauce");
  if (catalog.empty()) throw SchemaError("catalog", "must not be empty");
  std::set<std::string> slugs;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto path = "catalog[" + std::to_string(i) + "]";
    if (catalog[i].name.empty()) throw SchemaError(path + ".name", "must not be empty");
    if (!slugs.insert(product_slug(catalog[i].name)).second) throw SchemaError(path + ".name", "duplicate product");
    if (catalog[i].price <= 0) throw SchemaError(path + ".price", "must be positive");
  }
  const auto& fp = fault_plan;
  if (!(fp.popup_probability >= 0.0 && fp.popup_probability <= 1.0))
    throw SchemaError("fault_plan.popup_probability", "must lie in [0, 1]");
  if (fp.action_delay_min_ms < 0 || fp.action_delay_max_ms < fp.action_delay_min_ms)
    throw SchemaError("fault_plan.action_delay_ms", "must be a range [min, max] with 0 <= min <= max");
  if (fp.action_timeout_ms && *fp.action_timeout_ms <= 0)
    throw SchemaError("fault_plan.action_timeout_ms", "must be positive");
}

nlohmann::json to_json(const SimFixture& f) {
  nlohmann::json catalog = nlohmann::json::array();
  for (const auto& p : f.catalog) catalog.push_back({{"name", p.name}, {"price", price_text(p.price)}});
  nlohmann::json fault{{"popup_probability", f.fault_plan.popup_probability},
                       {"action_delay_ms", {f.fault_plan.action_delay_min_ms, f.fault_plan.action_delay_max_ms}},
                       {"rng_seed", f.fault_plan.rng_seed}};
  if (f.fault_plan.action_timeout_ms) fault["action_timeout_ms"] = *f.fault_plan.action_timeout_ms;
  return {{"users", f.users}, {"catalog", catalog}, {"fault_plan", fault}};
}

SimFixture sim_fixture_from_json(const nlohmann::json& j) {
  SimFixture f;
  try {
    f.users = j.at("users").get<std::map<std::string, std::string>>();
    for (const auto& p : j.at("catalog")) {
      const auto& price = p.at("price");
      f.catalog.push_back({p.at("name").get<std::string>(),
                           parse_rational(price.is_string() ? price.get<std::string>() : price.dump())});
    }
    if (auto it = j.find("fault_plan"); it != j.end()) {
      auto& fp = f.fault_plan;
      fp.popup_probability = it->value("popup_probability", 0.0);
      if (auto d = it->find("action_delay_ms"); d != it->end()) {
        fp.action_delay_min_ms = d->at(0).get<int>();
        fp.action_delay_max_ms = d->at(1).get<int>();
      }
      if (auto t = it->find("action_timeout_ms"); t != it->end() && !t->is_null()) fp.action_timeout_ms = t->get<int>();
      fp.rng_seed = it->value("rng_seed", std::uint64_t{0});
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("sim_fixture", e.what());
  } catch (const Error& e) {
    throw SchemaError("sim_fixture", e.what());
  }
  f.validate();
  return f;
}

SimFixture load_sim_fixture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read sim fixture " + path.string());
  try {
    return sim_fixture_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string(), e.what());
  }
}

nlohmann::json to_json(const SimState& s) {
  return {{"page", to_string(s.page)},
          {"session_user", s.session_user ? nlohmann::json(*s.session_user) : nlohmann::json()},
          {"sort_mode", to_string(s.sort_mode)},
          {"cart", std::vector<std::string>(s.cart.begin(), s.cart.end())},
          {"checkout_fields", {{"first", s.checkout_fields.first}, {"last", s.checkout_fields.last}, {"zip", s.checkout_fields.zip}}},
          {"error_banner", s.error_banner ? nlohmann::json(*s.error_banner) : nlohmann::json()},
          {"popup_active", s.popup_active}};
}

SimApp::SimApp(SimFixture fixture) : fixture_(std::move(fixture)) { fixture_.validate(); }

std::vector<Product> SimApp::visible_products(const SimState& state) const {
  std::vector<Product> out;
  std::vector<std::string> words;
  std::istringstream ss(lower(state.search_query));
  for (std::string w; ss >> w;) words.push_back(w);
  for (const auto& p : fixture_.catalog) {
    const auto name = lower(p.name);
    if (std::all_of(words.begin(), words.end(), [&](const std::string& w) { return name.find(w) != std::string::npos; }))
      out.push_back(p);
  }
  auto by_name = [](const Product& a, const Product& b) { return a.name < b.name; };
  switch (state.sort_mode) {
    case SortMode::name_asc: std::stable_sort(out.begin(), out.end(), by_name); break;
    case SortMode::name_desc:
      std::stable_sort(out.begin(), out.end(), [](const Product& a, const Product& b) { return a.name > b.name; });
      break;
    case SortMode::price_asc:
      std::stable_sort(out.begin(), out.end(), [](const Product& a, const Product& b) {
        return a.price != b.price ? a.price < b.price : a.name < b.name;
      });
      break;
    case SortMode::price_desc:
      std::stable_sort(out.begin(), out.end(), [](const Product& a, const Product& b) {
        return a.price != b.price ? a.price > b.price : a.name < b.name;
      });
      break;
  }
  return out;
}

const Product* SimApp::product_by_slug(std::string_view slug) const {
  for (const auto& p : fixture_.catalog)
    if (product_slug(p.name) == slug) return &p;
  return nullptr;
}

Observation SimApp::observe(const SimState& state, ActionOutcome outcome) const {
  Observation obs;
  obs.url = std::string(page_path(state.page));
  obs.title = std::string(kTitle);
  obs.popup_present = state.popup_active;
  obs.last_outcome = outcome;
  auto add = [&](std::string selector, ElementRole role, std::string text = {}, std::string value = {}) {
    obs.visible_elements.push_back({std::move(selector), role, std::move(text), std::move(value)});
  };

  if (state.page != Page::login) {
    add("shopping-cart-link", ElementRole::link);
    if (!state.cart.empty()) add("shopping-cart-badge", ElementRole::badge, std::to_string(state.cart.size()));
  }

  auto add_cart_lines = [&] {
    int i = 0;
    for (auto it = state.cart.begin(); it != state.cart.end(); it = state.cart.upper_bound(*it)) {
      const auto n = ++i;
      const auto* p = product_by_slug(product_slug(*it));
      add("cart-item-name-" + std::to_string(n), ElementRole::text, *it);
      add("cart-item-price-" + std::to_string(n), ElementRole::text, p ? price_text(p->price) : "");
      add("cart-item-quantity-" + std::to_string(n), ElementRole::text, std::to_string(state.cart.count(*it)));
      if (state.page == Page::cart) add("remove-" + product_slug(*it), ElementRole::button, "Remove");
    }
  };

  switch (state.page) {
    case Page::login:
      add("user-name", ElementRole::input, "", state.typed_username);
      add("password", ElementRole::input, "", state.typed_password);
      add("login-button", ElementRole::button, "Login");
      break;
    case Page::inventory: {
      add("inventory-container", ElementRole::text, "Products");
      std::string label;
      for (const auto& [mode, text] : kSortLabels)
        if (mode == state.sort_mode) label = text;
      add("product-sort-container", ElementRole::option, label, std::string(to_string(state.sort_mode)));
      add("search-input", ElementRole::input, "", state.search_query);
      int i = 0;
      for (const auto& p : visible_products(state)) {
        const auto n = std::to_string(++i);
        const auto slug = product_slug(p.name);
        add("inventory-item-name-" + n, ElementRole::text, p.name);
        add("inventory-item-price-" + n, ElementRole::text, price_text(p.price));
        add("inventory-item-img-" + slug, ElementRole::link, p.name);
        add("add-to-cart-" + slug, ElementRole::button, "Add to cart");
      }
      break;
    }
    case Page::cart:
      add("cart-list", ElementRole::text, "Your Cart");
      add_cart_lines();
      add("continue-shopping", ElementRole::button, "Continue Shopping");
      add("checkout", ElementRole::button, "Checkout");
      break;
    case Page::checkout_info:
      add("first-name", ElementRole::input, "", state.checkout_fields.first);
      add("last-name", ElementRole::input, "", state.checkout_fields.last);
      add("postal-code", ElementRole::input, "", state.checkout_fields.zip);
      add("continue", ElementRole::button, "Continue");
      add("cancel", ElementRole::button, "Cancel");
      break;
    case Page::checkout_overview: {
      add_cart_lines();
      Rational total(0);
      for (const auto& name : state.cart)
        if (const auto* p = product_by_slug(product_slug(name))) total += p->price;
      add("summary-subtotal", ElementRole::text, price_text(total));
      add("finish", ElementRole::button, "Finish");
      add("cancel", ElementRole::button, "Cancel");
      break;
    }
    case Page::checkout_complete:
      add("complete-header", ElementRole::text, "Thank you for your order!");
      add("back-to-products", ElementRole::button, "Back Home");
      break;
  }
  if (state.error_banner) add("error", ElementRole::text, *state.error_banner);
  if (state.popup_active) add("popup-close", ElementRole::popup, std::string(kPopupText));
  return obs;
}

ActionOutcome SimApp::navigate(SimState& state, std::string_view url) const {
  const auto path = url_path(url);
  std::optional<Page> target;
  for (const auto& [p, p_path] : kPages)
    if (p_path == path) target = p;
  if (path == "/index.html") target = Page::login;
  if (!target) {
    state.error_banner = "page not found: " + path;
    return ActionOutcome::ok;
  }
  if (*target == Page::login) {
    go_to(state, Page::login);
    return ActionOutcome::ok;
  }
  if (!state.session_user) {
    go_to(state, Page::login);
    state.error_banner = "Epic sadface: You can only access '" + path + "' when you are logged in.";
    return ActionOutcome::ok;
  }
  switch (*target) {
    case Page::checkout_info:
      if (state.cart.empty()) {
        state.error_banner = "cart empty";
        return ActionOutcome::ok;
      }
      break;
    case Page::checkout_overview:
      if (state.cart.empty()) {
        state.error_banner = "cart empty";
        return ActionOutcome::ok;
      }
      if (auto err = checkout_field_error(state.checkout_fields)) {
        state.error_banner = *err;
        return ActionOutcome::ok;
      }
      break;
    case Page::checkout_complete:
      if (state.page != Page::checkout_complete) {
        state.error_banner = "order not placed";
        return ActionOutcome::ok;
      }
      break;
    default:
      break;
  }
  go_to(state, *target);
  return ActionOutcome::ok;
}

ActionOutcome SimApp::type(SimState& state, std::string_view target, const std::string& value) const {
  switch (state.page) {
    case Page::login:
      if (target == "user-name") return state.typed_username = value, ActionOutcome::ok;
      if (target == "password") return state.typed_password = value, ActionOutcome::ok;
      break;
    case Page::inventory:
      if (target == "search-input") return state.search_query = value, ActionOutcome::ok;
      break;
    case Page::checkout_info:
      if (target == "first-name") return state.checkout_fields.first = value, ActionOutcome::ok;
      if (target == "last-name") return state.checkout_fields.last = value, ActionOutcome::ok;
      if (target == "postal-code") return state.checkout_fields.zip = value, ActionOutcome::ok;
      break;
    default:
      break;
  }
  return ActionOutcome::element_not_found;
}

ActionOutcome SimApp::click(SimState& state, std::string_view target) const {
  if (target == "login-button") {
    const auto& u = state.typed_username;
    const auto& p = state.typed_password;
    if (u.empty()) {
      state.error_banner = "Epic sadface: Username is required";
    } else if (p.empty()) {
      state.error_banner = "Epic sadface: Password is required";
    } else if (auto it = fixture_.users.find(u); it != fixture_.users.end() && it->second == p) {
      state.session_user = u;
      state.typed_username.clear();
      state.typed_password.clear();
      go_to(state, Page::inventory);
    } else {
      state.error_banner = "Epic sadface: Username and password do not match any user in this service";
    }
    return ActionOutcome::ok;
  }
  if (target == "shopping-cart-link") return go_to(state, Page::cart), ActionOutcome::ok;
  if (target.starts_with("add-to-cart-")) {
    if (const auto* p = product_by_slug(target.substr(12))) state.cart.insert(p->name);
    return ActionOutcome::ok;
  }
  if (target.starts_with("remove-")) {
    if (const auto* p = product_by_slug(target.substr(7))) {
      if (auto it = state.cart.find(p->name); it != state.cart.end()) state.cart.erase(it);
    }
    return ActionOutcome::ok;
  }
  if (target == "continue-shopping" || target == "back-to-products") return go_to(state, Page::inventory), ActionOutcome::ok;
  if (target == "checkout") {
    if (state.cart.empty())
      state.error_banner = "cart empty";
    else
      go_to(state, Page::checkout_info);
    return ActionOutcome::ok;
  }
  if (target == "continue") {
    if (auto err = checkout_field_error(state.checkout_fields))
      state.error_banner = *err;
    else
      go_to(state, Page::checkout_overview);
    return ActionOutcome::ok;
  }
  if (target == "cancel") {
    go_to(state, state.page == Page::checkout_info ? Page::cart : Page::inventory);
    return ActionOutcome::ok;
  }
  if (target == "finish") {
    state.cart.clear();
    state.checkout_fields = {};
    go_to(state, Page::checkout_complete);
    return ActionOutcome::ok;
  }
  if (target == "error") {
    state.error_banner.reset();
    return ActionOutcome::ok;
  }
  return ActionOutcome::ok;
}

ActionOutcome SimApp::step(SimState& state, const Action& action) const {
  const auto value = action.value.value_or("");
  const auto visible = [&](std::string_view selector) { return observe(state).find(selector) != nullptr; };
  switch (action.kind) {
    case ActionKind::navigate:
      return navigate(state, value);
    case ActionKind::type_text:
      return type(state, action.target, value);
    case ActionKind::click:
      if (!visible(action.target) || action.target == "popup-close") return ActionOutcome::element_not_found;
      return click(state, action.target);
    case ActionKind::select_option: {
      if (action.target != "product-sort-container" || !visible(action.target)) return ActionOutcome::element_not_found;
      const auto mode = parse_sort_mode(value);
      if (!mode) return ActionOutcome::element_not_found;
      state.sort_mode = *mode;
      return ActionOutcome::ok;
    }
    case ActionKind::read:
    case ActionKind::assert_visible:
      return visible(action.target) ? ActionOutcome::ok : ActionOutcome::element_not_found;
    case ActionKind::go_back:
      switch (state.page) {
        case Page::login: break;
        case Page::inventory: go_to(state, Page::login); break;
        case Page::cart: go_to(state, Page::inventory); break;
        case Page::checkout_info: go_to(state, Page::cart); break;
        case Page::checkout_overview: go_to(state, Page::checkout_info); break;
        case Page::checkout_complete: go_to(state, Page::inventory); break;
      }
      return ActionOutcome::ok;
    case ActionKind::dismiss_popup:
    case ActionKind::emit_verdict:
      return ActionOutcome::ok;
  }
  return ActionOutcome::ok;
}

SimSession::SimSession(SimFixture fixture, std::uint64_t seed) : app_(std::move(fixture)), rng_(seed) {
  const auto& fp = app_.fixture().fault_plan;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool popup = u(rng_) < fp.popup_probability;
  const int at = std::uniform_int_distribution<int>(1, 3)(rng_);
  popup_at_ = popup ? at : 0;
}

Observation SimSession::apply(const Action& action) {
  const auto& fp = app_.fixture().fault_plan;
  ++actions_;
  const int delay = std::uniform_int_distribution<int>(fp.action_delay_min_ms, fp.action_delay_max_ms)(rng_);
  last_duration_ = std::chrono::milliseconds(delay);
  if (actions_ == popup_at_) state_.popup_active = true;

  if (state_.popup_active) {
    if (action.kind == ActionKind::dismiss_popup ||
        (action.kind == ActionKind::click && action.target == "popup-close")) {
      state_.popup_active = false;
      last_outcome_ = ActionOutcome::ok;
    } else {
      last_outcome_ = ActionOutcome::popup_blocked;
    }
  } else if (fp.action_timeout_ms && delay > *fp.action_timeout_ms) {
    last_duration_ = std::chrono::milliseconds(*fp.action_timeout_ms);
    last_outcome_ = ActionOutcome::timeout;
  } else {
    last_outcome_ = app_.step(state_, action);
  }
  return snapshot();
}

Observation SimSession::snapshot() { return app_.observe(state_, last_outcome_); }

std::unique_ptr<SimSession> open_sim_session(const SimFixture& fixture, std::optional<std::uint64_t> seed) {
  fixture.validate();
  return std::make_unique<SimSession>(fixture, seed.value_or(fixture.fault_plan.rng_seed));
}

OracleResult oracle_run(std::span<const Action> plan, const SimFixture& fixture) {
  auto clean = fixture;
  clean.fault_plan = {};
  const SimApp app(clean);
  OracleResult result;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto before = result.state.error_banner;
    const auto outcome = app.step(result.state, plan[i]);
    if (outcome != ActionOutcome::ok) {
      result.error = "action " + std::to_string(i + 1) + " (" + std::string(to_string(plan[i].kind)) + " " +
                     plan[i].target + "): " + std::string(to_string(outcome));
      break;
    }
    if (result.state.error_banner && result.state.error_banner != before) {
      result.error = *result.state.error_banner;
      break;
    }
  }
  return result;
}

}  // namespace aqua::browser
