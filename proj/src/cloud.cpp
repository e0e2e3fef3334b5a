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

#include "waas/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "waas/errors.hpp"

namespace waas {

std::string_view to_string(VmState s) {
  switch (s) {
    case VmState::provisioning: return "provisioning";
    case VmState::idle: return "idle";
    case VmState::busy: return "busy";
    case VmState::terminated: return "terminated";
  }
  return "?";
}

void CloudConfig::validate() const {
  if (catalog.empty()) throw ConfigError("cloud.catalog", "must list at least one VM type");
  std::set<std::string> names;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& t = catalog[i];
    const std::string where = "cloud.catalog[" + std::to_string(i) + "]";
    if (t.name.empty()) throw ConfigError(where + ".name", "must be non-empty");
    if (!names.insert(t.name).second) throw ConfigError(where + ".name", "duplicate type '" + t.name + "'");
    if (t.price_per_second <= kZeroMoney) throw ConfigError(where + ".price_per_second", "must be > 0");
    if (!(t.speed_factor > 0.0) || !std::isfinite(t.speed_factor)) {
      throw ConfigError(where + ".speed_factor", "must be > 0");
    }
  }
  if (provisioning_delay < SimTime{0}) throw ConfigError("cloud.provisioning_delay", "must be >= 0");
  if (deprovisioning_delay < SimTime{0}) throw ConfigError("cloud.deprovisioning_delay", "must be >= 0");
  if (idle_threshold <= SimTime{0}) throw ConfigError("cloud.idle_threshold", "must be > 0");
  if (scan_interval <= SimTime{0}) throw ConfigError("cloud.scan_interval", "must be > 0");
  if (variability.mode == Variability::Mode::lognormal &&
      (!(variability.sigma >= 0.0) || !std::isfinite(variability.sigma))) {
    throw ConfigError("cloud.variability.sigma", "must be >= 0");
  }
}

std::optional<std::size_t> CloudConfig::find_type(std::string_view name) const {
  for (std::size_t i = 0; i < catalog.size(); ++i)
    if (catalog[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> types_by_speed(std::span<const VmType> catalog) {
  std::vector<std::size_t> order(catalog.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [catalog](std::size_t a, std::size_t b) {
    const auto& x = catalog[a];
    const auto& y = catalog[b];
    if (x.speed_factor != y.speed_factor) return x.speed_factor > y.speed_factor;
    if (x.price_per_second != y.price_per_second) return x.price_per_second < y.price_per_second;
    return x.name < y.name;
  });
  return order;
}

std::vector<std::size_t> CloudConfig::types_by_speed() const { return waas::types_by_speed(catalog); }

std::vector<VmType> default_t2_catalog() {
  auto p = [](std::int64_t picos) { return Money::from_picos(picos); };
  return {
      {"t2.micro", 1, 1024, p(4'100'000), 1.0},
      {"t2.small", 1, 2048, p(8'200'000), 1.2},
      {"t2.medium", 2, 4096, p(16'400'000), 1.6},
      {"t2.large", 2, 8192, p(38'200'000), 2.0},
  };
}

CloudConfig default_cloud_config() {
  CloudConfig c;
  c.catalog = default_t2_catalog();
  c.provisioning_delay = SimTime{90 * kMicrosPerSecond};
  c.deprovisioning_delay = SimTime{10 * kMicrosPerSecond};
  c.idle_threshold = SimTime{60 * kMicrosPerSecond};
  c.scan_interval = SimTime{10 * kMicrosPerSecond};
  return c;
}

SimTime nominal_runtime(const VmType& type, double reference_runtime, double transfer_time) {
  const auto t = from_seconds(reference_runtime / type.speed_factor + transfer_time);
  return std::max(t, SimTime{1});
}

SimTime task_runtime_on(const VmType& type, double reference_runtime, const Variability& variability, Rng& rng,
                        double transfer_time) {
  if (variability.mode == Variability::Mode::none) return nominal_runtime(type, reference_runtime, transfer_time);
  const double factor = std::exp(variability.sigma * rng.normal());
  const auto t = from_seconds(reference_runtime / type.speed_factor * factor + transfer_time);
  return std::max(t, SimTime{1});
}

Money estimated_task_cost(const VmType& type, SimTime est_runtime) {
  return type.price_per_second * ceil_seconds(est_runtime);
}

Money finalize_billing(VmInstance& vm, SimTime termination_time) {
  if (vm.state == VmState::terminated) {
    throw IllegalStateError("vm " + std::to_string(vm.id) + " is already terminated");
  }
  const auto active = std::max(termination_time - vm.billing_start, SimTime{0});
  vm.billed_seconds = ceil_seconds(active);
  vm.bill = vm.type.price_per_second * vm.billed_seconds;
  vm.terminated_at = termination_time;
  vm.state = VmState::terminated;
  vm.idle_since.reset();
  vm.busy_until.reset();
  return vm.bill;
}

Fleet::Fleet(CloudConfig config) : config_(std::move(config)) { config_.validate(); }

VmInstance& Fleet::checked(VmId id, VmState expected, const char* op) {
  if (id >= vms_.size()) throw IllegalStateError(std::string(op) + ": unknown vm " + std::to_string(id));
  auto& vm = vms_[id];
  if (vm.state != expected) {
    throw IllegalStateError(std::string(op) + ": vm " + std::to_string(id) + " is " + std::string(to_string(vm.state)) +
                            ", expected " + std::string(to_string(expected)));
  }
  return vm;
}

VmInstance& Fleet::provision(std::size_t type_index, SimTime now) {
  if (type_index >= config_.catalog.size()) throw ArgumentError("provision: type index out of range");
  VmInstance vm;
  vm.id = vms_.size();
  vm.type = config_.catalog[type_index];
  vm.type_index = type_index;
  vm.state = VmState::provisioning;
  vm.lease_start = now;
  vm.available_at = now + config_.provisioning_delay;
  vm.billing_start = config_.bill_provisioning ? vm.lease_start : vm.available_at;
  vms_.push_back(std::move(vm));
  ++live_;
  return vms_.back();
}

void Fleet::make_available(VmId id, SimTime now) {
  auto& vm = checked(id, VmState::provisioning, "make_available");
  vm.state = VmState::idle;
  vm.idle_since = now;
}

void Fleet::start_task(VmId id, SimTime now, SimTime until) {
  auto& vm = checked(id, VmState::idle, "start_task");
  vm.state = VmState::busy;
  vm.idle_since.reset();
  vm.busy_until = until;
  vm.busy_time += until - now;
  ++vm.tasks_run;
}

void Fleet::finish_task(VmId id, SimTime now) {
  auto& vm = checked(id, VmState::busy, "finish_task");
  vm.state = VmState::idle;
  vm.busy_until.reset();
  vm.idle_since = now;
}

Money Fleet::terminate(VmId id, SimTime now) {
  auto& vm = checked(id, VmState::idle, "terminate");
  --live_;
  return finalize_billing(vm, now + config_.deprovisioning_delay);
}

std::vector<VmInstance> Fleet::idle_scan(SimTime now) {
  std::vector<VmInstance> terminated;
  for (auto& vm : vms_) {
    if (vm.state == VmState::idle && now - *vm.idle_since >= config_.idle_threshold) {
      terminate(vm.id, now);
      terminated.push_back(vm);
    }
  }
  return terminated;
}

std::vector<VmId> Fleet::idle_vms() const {
  std::vector<VmId> out;
  for (const auto& vm : vms_)
    if (vm.state == VmState::idle) out.push_back(vm.id);
  return out;
}

std::size_t Fleet::active_work_count() const {
  return static_cast<std::size_t>(std::count_if(vms_.begin(), vms_.end(), [](const VmInstance& vm) {
    return vm.state == VmState::provisioning || vm.state == VmState::busy;
  }));
}

Money Fleet::total_billed() const {
  Money total;
  for (const auto& vm : vms_) total += vm.bill;
  return total;
}

}  // namespace waas
