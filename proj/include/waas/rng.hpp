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

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace waas {

std::uint64_t fnv1a64(std::string_view bytes);

/// Derives an independent seed for a named stream (splitmix64 finalizer over
/// `seed ^ fnv1a64(name)`), so adding a stream never perturbs the others.
std::uint64_t stream_seed(std::uint64_t seed, std::string_view name);

/// Reproducible random source.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// <random> distributions are not, so the transforms below are written out
/// to keep traces identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t seed, std::string_view name) { return Rng(stream_seed(seed, name)); }

  /// Uniform on [0, 1) with 53 random bits. One engine draw.
  double uniform();
  /// Standard normal via Box-Muller. Two uniform draws; the sine branch is discarded.
  double normal();
  /// Exponential with the given mean. One uniform draw.
  double exponential(double mean);
  /// Uniform index in [0, n). One uniform draw.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace waas
