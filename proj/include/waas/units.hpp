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

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>

namespace waas {

/// Simulated time. Integer microseconds keep event ordering exact.
using SimTime = std::chrono::microseconds;

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;

/// Rounds to the nearest microsecond.
SimTime from_seconds(double seconds);
double to_seconds(SimTime t);
/// Whole seconds covering `t` (billing granularity). `t` must be >= 0.
std::int64_t ceil_seconds(SimTime t);

/// Fixed-point money in picodollars.
///
/// The cheapest catalog price is $0.0000041/s (4.1 nano-dollars), so a
/// nano-dollar grid cannot represent per-second accruals exactly; one
/// picodollar can, and int64 still covers about nine million dollars.
class Money {
 public:
  static constexpr std::int64_t kPicosPerDollar = 1'000'000'000'000;

  constexpr Money() = default;

  static constexpr Money from_picos(std::int64_t picos) {
    Money m;
    m.picos_ = picos;
    return m;
  }
  /// Rounds to the nearest picodollar.
  static Money from_dollars(double dollars);

  constexpr std::int64_t picos() const { return picos_; }
  double dollars() const { return static_cast<double>(picos_) / static_cast<double>(kPicosPerDollar); }

  /// Exact decimal rendering, rounded half away from zero to `decimals` places (0..12).
  std::string to_string(int decimals = 9) const;

  constexpr Money& operator+=(Money o) {
    picos_ += o.picos_;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    picos_ -= o.picos_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr Money operator-(Money a) { return from_picos(-a.picos_); }
  friend constexpr Money operator*(Money a, std::int64_t k) { return from_picos(a.picos_ * k); }
  friend constexpr Money operator*(std::int64_t k, Money a) { return from_picos(a.picos_ * k); }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  std::int64_t picos_ = 0;
};

inline constexpr Money kZeroMoney{};

}  // namespace waas
