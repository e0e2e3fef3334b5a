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

#include "doctest.h"
#include "waas/cloud.hpp"
#include "waas/errors.hpp"

using waas::Money;
using waas::SimTime;

namespace {

const waas::VmType& type_named(const std::vector<waas::VmType>& catalog, const std::string& name) {
  for (const auto& t : catalog)
    if (t.name == name) return t;
  throw std::logic_error("no type " + name);
}

SimTime s(double seconds) { return waas::from_seconds(seconds); }

}  // namespace

TEST_CASE("default catalog carries the per-second prices") {
  const auto c = waas::default_t2_catalog();
  REQUIRE(c.size() == 4);
  CHECK(type_named(c, "t2.micro").price_per_second == Money::from_dollars(0.0000041));
  CHECK(type_named(c, "t2.small").price_per_second == Money::from_dollars(0.0000082));
  CHECK(type_named(c, "t2.medium").price_per_second == Money::from_dollars(0.0000164));
  CHECK(type_named(c, "t2.large").price_per_second == Money::from_dollars(0.0000382));
  CHECK(type_named(c, "t2.large").vcpus == 2);
  CHECK(type_named(c, "t2.micro").memory_mb == 1024);
  const auto order = waas::types_by_speed(c);
  CHECK(c[order.front()].name == "t2.large");
  CHECK(c[order.back()].name == "t2.micro");

  const auto cfg = waas::default_cloud_config();
  CHECK(cfg.provisioning_delay == s(90));
  CHECK(cfg.deprovisioning_delay == s(10));
  CHECK(cfg.idle_threshold == s(60));
  CHECK(cfg.scan_interval == s(10));
  CHECK(cfg.variability.mode == waas::Variability::Mode::none);
}

TEST_CASE("runtime on a type") {
  waas::VmType fast{"f", 1, 1, Money::from_picos(1), 2.0};
  waas::VmType unit{"u", 1, 1, Money::from_picos(1), 1.0};
  waas::Rng rng(1);
  const waas::Variability none;
  CHECK(waas::task_runtime_on(fast, 100, none, rng) == s(50));
  CHECK(waas::task_runtime_on(unit, 100, none, rng) == s(100));
  CHECK(waas::task_runtime_on(unit, 100, none, rng, 5) == s(105));
  CHECK(waas::nominal_runtime(unit, 1e-9) == SimTime{1});
}

TEST_CASE("lognormal sample mean matches exp(sigma^2/2)") {
  waas::VmType t{"t", 1, 1, Money::from_picos(1), 2.0};
  const waas::Variability v{waas::Variability::Mode::lognormal, 0.1};
  waas::Rng rng(77);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += waas::to_seconds(waas::task_runtime_on(t, 100, v, rng));
  const double expected = 100.0 * std::exp(0.1 * 0.1 / 2) / 2.0;
  CHECK(std::abs(sum / 10000 - expected) < 0.03 * expected);
}

TEST_CASE("estimated task cost") {
  const auto c = waas::default_t2_catalog();
  CHECK(waas::estimated_task_cost(type_named(c, "t2.large"), s(100)) == Money::from_dollars(0.00382));
  CHECK(waas::estimated_task_cost(type_named(c, "t2.micro"), s(100)) == Money::from_dollars(0.00041));
  CHECK(waas::estimated_task_cost(type_named(c, "t2.micro"), s(99.2)) == Money::from_dollars(0.00041));
}

TEST_CASE("finalize billing") {
  const auto c = waas::default_t2_catalog();
  waas::VmInstance vm;
  vm.type = type_named(c, "t2.medium");
  vm.billing_start = s(90);
  CHECK(waas::finalize_billing(vm, s(1090)) == Money::from_dollars(0.0164));
  CHECK(vm.billed_seconds == 1000);
  vm.state = waas::VmState::terminated;
  CHECK_THROWS_AS(waas::finalize_billing(vm, s(2000)), waas::IllegalStateError);

  waas::VmInstance at_start;
  at_start.type = vm.type;
  at_start.billing_start = s(90);
  CHECK(waas::finalize_billing(at_start, s(90)) == waas::kZeroMoney);

  waas::VmInstance partial;
  partial.type = vm.type;
  CHECK(waas::finalize_billing(partial, s(999.5)) == vm.type.price_per_second * 1000);
}

TEST_CASE("provisioning lifecycle") {
  auto cfg = waas::default_cloud_config();
  waas::Fleet fleet(cfg);
  const auto large = *cfg.find_type("t2.large");
  const auto& a = fleet.provision(large, s(0));
  CHECK(a.state == waas::VmState::provisioning);
  CHECK(a.available_at == s(90));
  CHECK(a.billing_start == s(90));
  const auto id_a = a.id;
  const auto id_b = fleet.provision(large, s(0)).id;
  CHECK(id_a != id_b);
  CHECK(fleet.live_count() == 2);
  CHECK(fleet.active_work_count() == 2);

  CHECK_THROWS_AS(fleet.start_task(id_a, s(0), s(10)), waas::IllegalStateError);
  fleet.make_available(id_a, s(90));
  CHECK(fleet.vm(id_a).idle_since == s(90));
  fleet.start_task(id_a, s(90), s(390));
  CHECK(fleet.vm(id_a).busy_until == s(390));
  CHECK_FALSE(fleet.vm(id_a).idle_since.has_value());
  CHECK_THROWS_AS(fleet.terminate(id_a, s(100)), waas::IllegalStateError);
  fleet.finish_task(id_a, s(390));
  CHECK(fleet.vm(id_a).busy_time == s(300));
  CHECK_FALSE(fleet.vm(id_a).busy_until.has_value());

  SUBCASE("zero delay is available at once") {
    cfg.provisioning_delay = SimTime{0};
    waas::Fleet quick(cfg);
    CHECK(quick.provision(0, s(5)).available_at == s(5));
  }
  SUBCASE("billing provisioning starts the clock at the request") {
    cfg.bill_provisioning = true;
    waas::Fleet billed(cfg);
    CHECK(billed.provision(0, s(5)).billing_start == s(5));
  }
}

TEST_CASE("idle scan boundaries") {
  auto cfg = waas::default_cloud_config();
  cfg.provisioning_delay = SimTime{0};
  cfg.deprovisioning_delay = SimTime{0};
  waas::Fleet fleet(cfg);
  const auto id = fleet.provision(0, s(0)).id;
  fleet.make_available(id, s(0));
  CHECK(fleet.idle_scan(s(59)).empty());
  CHECK(fleet.vm(id).state == waas::VmState::idle);
  const auto gone = fleet.idle_scan(s(60));
  REQUIRE(gone.size() == 1);
  CHECK(gone.front().id == id);
  CHECK(fleet.vm(id).state == waas::VmState::terminated);
  CHECK(fleet.vm(id).terminated_at == s(60));
  CHECK(fleet.live_count() == 0);

  SUBCASE("busy and provisioning instances are left alone") {
    waas::Fleet f(cfg);
    const auto busy = f.provision(0, s(0)).id;
    f.make_available(busy, s(0));
    f.start_task(busy, s(0), s(300));
    auto slow_cfg = cfg;
    slow_cfg.provisioning_delay = s(500);
    waas::Fleet g(slow_cfg);
    g.provision(0, s(0));
    CHECK(f.idle_scan(s(200)).empty());
    CHECK(g.idle_scan(s(200)).empty());
    // Busy for 300 s, then idle: terminated on the first tick at or after 360.
    f.finish_task(busy, s(300));
    for (int tick = 310; tick <= 400; tick += 10) {
      const auto t = f.idle_scan(s(tick));
      if (!t.empty()) {
        CHECK(tick == 360);
        break;
      }
    }
  }
}

TEST_CASE("fleet cost conservation") {
  auto cfg = waas::default_cloud_config();
  waas::Fleet fleet(cfg);
  waas::Rng rng(3);
  std::vector<waas::VmId> ids;
  for (int i = 0; i < 25; ++i) ids.push_back(fleet.provision(rng.index(cfg.catalog.size()), s(i * 7.3)).id);
  Money expected;
  std::int64_t lower_us = 0;
  for (auto id : ids) {
    const auto& vm = fleet.vm(id);
    fleet.make_available(id, vm.available_at);
    const auto start = vm.available_at;
    const auto busy_end = start + s(1 + rng.uniform() * 500);
    fleet.start_task(id, start, busy_end);
    fleet.finish_task(id, busy_end);
    const auto end = busy_end + s(rng.uniform() * 70);
    const auto bill = fleet.terminate(id, end);
    // Price integrated over the live interval, plus at most one second per instance.
    const auto live = end + cfg.deprovisioning_delay - start;
    lower_us += live.count();
    const auto exact = static_cast<double>(live.count()) / 1e6 * static_cast<double>(vm.type.price_per_second.picos());
    CHECK(static_cast<double>(bill.picos()) >= exact - 1.0);
    CHECK(static_cast<double>(bill.picos()) < exact + static_cast<double>(vm.type.price_per_second.picos()));
    expected += bill;
  }
  CHECK(fleet.total_billed() == expected);
  CHECK(lower_us > 0);
  CHECK(fleet.live_count() == 0);
}

TEST_CASE("config validation names the field") {
  auto cfg = waas::default_cloud_config();
  cfg.catalog[2].price_per_second = waas::kZeroMoney;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const waas::ConfigError& e) {
    CHECK(e.field() == "cloud.catalog[2].price_per_second");
  }
  cfg = waas::default_cloud_config();
  cfg.idle_threshold = SimTime{0};
  CHECK_THROWS_AS(cfg.validate(), waas::ConfigError);
  cfg = waas::default_cloud_config();
  cfg.catalog[1].name = cfg.catalog[0].name;
  CHECK_THROWS_AS(cfg.validate(), waas::ConfigError);
  cfg = waas::default_cloud_config();
  cfg.provisioning_delay = s(-1);
  CHECK_THROWS_AS(cfg.validate(), waas::ConfigError);
  cfg = waas::default_cloud_config();
  cfg.catalog[0].speed_factor = 0;
  CHECK_THROWS_AS(cfg.validate(), waas::ConfigError);
}
