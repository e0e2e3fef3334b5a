// Copyright 2026 The WaaS Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "waas/units.hpp"

#include <cmath>
#include <cstdlib>

namespace waas {

SimTime from_seconds(double seconds) { return SimTime{std::llround(seconds * static_cast<double>(kMicrosPerSecond))}; }

double to_seconds(SimTime t) { return static_cast<double>(t.count()) / static_cast<double>(kMicrosPerSecond); }

std::int64_t ceil_seconds(SimTime t) {
  const auto us = t.count();
  if (us <= 0) return 0;
  return (us + kMicrosPerSecond - 1) / kMicrosPerSecond;
}

Money Money::from_dollars(double dollars) {
  return from_picos(std::llround(dollars * static_cast<double>(kPicosPerDollar)));
}

std::string Money::to_string(int decimals) const {
  if (decimals < 0) decimals = 0;
  if (decimals > 12) decimals = 12;
  std::int64_t scale = 1;
  for (int i = decimals; i < 12; ++i) scale *= 10;
  std::int64_t frac_mod = 1;
  for (int i = 0; i < decimals; ++i) frac_mod *= 10;

  const bool negative = picos_ < 0;
  // |INT64_MIN| is out of range for our magnitudes; budgets never get near it.
  const std::int64_t magnitude = negative ? -picos_ : picos_;
  const std::int64_t rounded = (magnitude + scale / 2) / scale;
  const std::int64_t whole = rounded / frac_mod;
  const std::int64_t frac = rounded % frac_mod;

  std::string out = negative && rounded != 0 ? "-" : "";
  out += std::to_string(whole);
  if (decimals > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - digits.size(), '0');
    out += digits;
  }
  return out;
}

}  // namespace waas
