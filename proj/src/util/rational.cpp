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

#include "aqua/util/rational.hpp"

#include <charconv>
#include <cstdlib>

#include "aqua/core/error.hpp"

namespace aqua {

namespace {

std::int64_t pow10(int n) {
  std::int64_t p = 1;
  for (int i = 0; i < n; ++i) p *= 10;
  return p;
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error("not an integer: '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace

std::string format_fixed(const Rational& value, int decimals) {
  const bool negative = value < 0;
  const Rational scaled = (negative ? -value : value) * pow10(decimals);
  std::int64_t q = scaled.numerator() / scaled.denominator();
  const Rational rem = scaled - q;
  if (rem > Rational(1, 2) || (rem == Rational(1, 2) && q % 2 == 1)) ++q;

  std::string digits = std::to_string(q);
  if (decimals > 0) {
    if (static_cast<int>(digits.size()) <= decimals) {
      digits.insert(0, static_cast<std::size_t>(decimals + 1 - static_cast<int>(digits.size())), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  }
  if (negative && q != 0) digits.insert(0, "-");
  return digits;
}

std::string format_percent(const Rational& value) { return format_fixed(value * 100, 1) + "%"; }

std::string to_string(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw Error("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  bool negative = false;
  if (text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  Rational out;
  if (dot == std::string_view::npos) {
    out = Rational(parse_int(text));
  } else {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw Error("too many fractional digits: '" + std::string(text) + "'");
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    out = Rational(w) + Rational(f, pow10(static_cast<int>(frac.size())));
  }
  return negative ? -out : out;
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

}  // namespace aqua
