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

#include <random>
#include <sstream>

#include "doctest.h"
#include "waas/errors.hpp"
#include "waas/estimator.hpp"

using waas::SimTime;

namespace {

std::vector<waas::VmType> two_types() {
  return {{"A", 1, 1, waas::Money::from_picos(1), 1.0}, {"B", 1, 1, waas::Money::from_picos(2), 2.0}};
}

waas::EstimatorConfig history(std::size_t window) {
  waas::EstimatorConfig c;
  c.mode = waas::EstimatorMode::history;
  c.window = window;
  return c;
}

waas::ExecutionRecord rec(const std::string& kind, const std::string& type, double seconds) {
  return {kind, type, waas::from_seconds(seconds), SimTime{0}};
}

}  // namespace

TEST_CASE("oracle mode returns the nominal runtime") {
  const auto types = two_types();
  waas::RuntimeEstimator est({}, types);
  est.register_kind("dock", 120);
  CHECK(est.estimate("dock", types[1]) == waas::from_seconds(60));
  CHECK_THROWS_AS(est.estimate("missing", types[0]), waas::UnknownKindError);
}

TEST_CASE("history mode means the window") {
  const auto types = two_types();
  waas::RuntimeEstimator est(history(2), types);
  est.register_kind("k", 100);
  est.record(rec("k", "A", 50));
  est.record(rec("k", "A", 70));
  CHECK(est.estimate("k", types[0]) == waas::from_seconds(60));
}

TEST_CASE("records on another type are rescaled by speed") {
  const auto types = two_types();
  waas::RuntimeEstimator est(history(10), types);
  est.record(rec("k", "A", 100));
  CHECK(est.estimate("k", types[1]) == waas::from_seconds(50));
  CHECK(est.estimate("k", types[0]) == waas::from_seconds(100));
}

TEST_CASE("cold start applies the margin") {
  const auto types = two_types();
  auto cfg = history(3);
  cfg.cold_start_margin = 1.5;
  waas::RuntimeEstimator est(cfg, types);
  est.register_kind("k", 100);
  CHECK(est.estimate("k", types[1]) == waas::from_seconds(75));
}

TEST_CASE("window of one follows the latest record") {
  const auto types = two_types();
  waas::RuntimeEstimator est(history(1), types);
  est.record(rec("k", "A", 40));
  CHECK(est.estimate("k", types[0]) == waas::from_seconds(40));
  est.record(rec("k", "A", 90));
  CHECK(est.estimate("k", types[0]) == waas::from_seconds(90));
  CHECK(est.record_count() == 2);
}

TEST_CASE("window mean matches brute force over 1000 records") {
  const auto types = two_types();
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> runtime(1.0, 500.0);
  std::uniform_int_distribution<int> pick(0, 1);
  for (std::size_t window : {1u, 3u, 10u, 64u}) {
    waas::RuntimeEstimator est(history(window), types);
    std::vector<std::pair<std::string, SimTime>> all;
    for (int i = 0; i < 1000; ++i) {
      const auto r = rec("k", types[pick(gen)].name, runtime(gen));
      all.emplace_back(r.vm_type_name, r.actual_runtime);
      est.record(r);
      if (i % 50 != 49) continue;
      for (const auto& type : types) {
        double sum = 0;
        std::size_t n = 0;
        for (auto it = all.rbegin(); it != all.rend() && n < window; ++it) {
          if (it->first != type.name) continue;
          sum += static_cast<double>(it->second.count());
          ++n;
        }
        REQUIRE(n > 0);
        CHECK(est.estimate("k", type).count() == std::llround(sum / static_cast<double>(n)));
      }
    }
  }
}

TEST_CASE("records older than the window do not matter") {
  const auto types = two_types();
  waas::RuntimeEstimator a(history(3), types), b(history(3), types);
  a.record(rec("k", "A", 1000));
  a.record(rec("k", "A", 5));
  for (double v : {10.0, 20.0, 30.0}) {
    a.record(rec("k", "A", v));
    b.record(rec("k", "A", v));
  }
  CHECK(a.estimate("k", types[0]) == b.estimate("k", types[0]));
}

TEST_CASE("faster types never get longer estimates") {
  const auto catalog = waas::default_t2_catalog();
  for (auto mode : {waas::EstimatorMode::oracle, waas::EstimatorMode::history}) {
    waas::EstimatorConfig cfg;
    cfg.mode = mode;
    waas::RuntimeEstimator est(cfg, catalog);
    est.register_kind("k", 333.3);
    if (mode == waas::EstimatorMode::history) est.record(rec("k", "t2.small", 250));
    const auto order = waas::types_by_speed(catalog);
    for (std::size_t i = 1; i < order.size(); ++i) {
      CHECK(est.estimate("k", catalog[order[i - 1]]) <= est.estimate("k", catalog[order[i]]));
      CHECK(est.estimate("k", catalog[order[i]]) > SimTime{0});
    }
  }
}

TEST_CASE("bad input") {
  const auto types = two_types();
  waas::RuntimeEstimator est(history(2), types);
  CHECK_THROWS_AS(est.record(rec("k", "A", 0)), waas::ArgumentError);
  CHECK_THROWS_AS(est.record(rec("k", "nope", 10)), waas::ArgumentError);
  CHECK_THROWS_AS(waas::RuntimeEstimator(history(0), types), waas::ConfigError);
  auto cfg = history(1);
  cfg.cold_start_margin = 0.5;
  CHECK_THROWS_AS(waas::RuntimeEstimator(cfg, types), waas::ConfigError);
}

TEST_CASE("history bootstrap file") {
  std::istringstream csv("kind,vm_type,actual_runtime\nk,A,30\r\nk,B,10.5\n\n");
  const auto recs = waas::read_history_csv(csv);
  REQUIRE(recs.size() == 2);
  CHECK(recs[1].actual_runtime == waas::from_seconds(10.5));

  auto cfg = history(5);
  cfg.bootstrap = recs;
  waas::RuntimeEstimator est(cfg, two_types());
  CHECK(est.record_count() == 2);
  CHECK(est.estimate("k", two_types()[0]) == waas::from_seconds(30));

  std::istringstream bad("k,A\n");
  CHECK_THROWS_AS(waas::read_history_csv(bad), waas::SchemaError);
  std::istringstream neg("k,A,-3\n");
  CHECK_THROWS_AS(waas::read_history_csv(neg), waas::SchemaError);
}
