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
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace aqua {

using Rational = boost::rational<std::int64_t>;

// Rounds half-to-even at `decimals` fractional digits and prints the result
// in fixed notation.
std::string format_fixed(const Rational& value, int decimals);

// value * 100 with one decimal and a trailing '%', e.g. 1/12 -> "8.3%".
std::string format_percent(const Rational& value);

// "num/den" with the canonical (reduced) representation.
std::string to_string(const Rational& value);

// Accepts "num/den", integers and plain decimals ("0.0025").
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

}  // namespace aqua
