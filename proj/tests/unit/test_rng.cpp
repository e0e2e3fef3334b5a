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

#include <cmath>
#include <set>

#include "doctest.h"
#include "waas/rng.hpp"

TEST_CASE("fnv1a64 matches the published test vectors") {
  CHECK(waas::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(waas::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(waas::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("named streams are distinct and stable") {
  std::set<std::uint64_t> seeds;
  for (const char* name : {"arrival", "template", "variability"}) seeds.insert(waas::stream_seed(7, name));
  CHECK(seeds.size() == 3);
  CHECK(waas::stream_seed(7, "arrival") == waas::stream_seed(7, "arrival"));
  CHECK(waas::stream_seed(7, "arrival") != waas::stream_seed(8, "arrival"));

  auto a = waas::Rng::substream(42, "arrival");
  auto b = waas::Rng::substream(42, "arrival");
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform stays in [0, 1) and index in range") {
  waas::Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(rng.index(7) < 7);
  }
}

TEST_CASE("exponential mean within 5% over 10000 draws") {
  waas::Rng rng(2024);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += rng.exponential(120.0);
  CHECK(std::abs(sum / 10000 - 120.0) < 0.05 * 120.0);
}

TEST_CASE("normal draws have zero mean and unit variance") {
  waas::Rng rng(99);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}
