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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "waas/rng.hpp"
#include "waas/units.hpp"

namespace waas {

struct VmType {
  std::string name;
  int vcpus = 1;
  int memory_mb = 1024;
  Money price_per_second;
  double speed_factor = 1.0;  // runtime on this type = reference_runtime / speed_factor

  friend bool operator==(const VmType&, const VmType&) = default;
};

using VmId = std::size_t;

enum class VmState { provisioning, idle, busy, terminated };

std::string_view to_string(VmState s);

struct VmInstance {
  VmId id = 0;
  VmType type;
  std::size_t type_index = 0;
  VmState state = VmState::provisioning;
  SimTime lease_start{0};    // provision request
  SimTime available_at{0};   // lease_start + provisioning delay
  SimTime billing_start{0};  // available_at, or lease_start when provisioning is billed
  std::optional<SimTime> idle_since;
  std::optional<SimTime> busy_until;
  SimTime busy_time{0};
  std::size_t tasks_run = 0;
  std::optional<SimTime> terminated_at;  // billing end (includes deprovisioning delay)
  std::int64_t billed_seconds = 0;
  Money bill;
};

struct Variability {
  enum class Mode { none, lognormal };
  Mode mode = Mode::none;
  double sigma = 0.0;
};

struct CloudConfig {
  std::vector<VmType> catalog;
  SimTime provisioning_delay{0};
  SimTime deprovisioning_delay{0};
  SimTime idle_threshold{0};
  SimTime scan_interval{0};
  Variability variability;
  bool bill_provisioning = false;

  /// Throws ConfigError naming the offending field under `cloud.`.
  void validate() const;
  std::optional<std::size_t> find_type(std::string_view name) const;
  std::vector<std::size_t> types_by_speed() const;
  std::size_t fastest_type() const { return types_by_speed().front(); }
};

/// Catalog indices, fastest first (speed desc, then price asc, then name).
std::vector<std::size_t> types_by_speed(std::span<const VmType> catalog);

/// t2.micro, t2.small, t2.medium, t2.large with their per-second prices.
/// Speed factors (1.0, 1.2, 1.6, 2.0) are synthetic.
std::vector<VmType> default_t2_catalog();

/// T2 catalog; 90 s provisioning, 10 s deprovisioning, 60 s idle threshold,
/// 10 s scan interval, no variability.
CloudConfig default_cloud_config();

/// Runtime without variability, rounded to the microsecond (min 1 us).
SimTime nominal_runtime(const VmType& type, double reference_runtime, double transfer_time = 0.0);

/// Realized runtime. Lognormal mode multiplies the compute part by
/// exp(sigma * Z) with one Rng::normal() draw per call; transfer time is
/// added unscaled.
SimTime task_runtime_on(const VmType& type, double reference_runtime, const Variability& variability, Rng& rng,
                        double transfer_time = 0.0);

/// ceil(est_runtime) seconds at the type's per-second price.
Money estimated_task_cost(const VmType& type, SimTime est_runtime);

/// Closes the lease at `termination_time` and returns ceil(active seconds) * price,
/// where the active lease starts at `vm.billing_start`.
/// Throws IllegalStateError if the instance is already terminated.
Money finalize_billing(VmInstance& vm, SimTime termination_time);

/// The set of leased instances of one simulation.
class Fleet {
 public:
  explicit Fleet(CloudConfig config);

  const CloudConfig& config() const { return config_; }

  VmInstance& provision(std::size_t type_index, SimTime now);
  /// provisioning -> idle
  void make_available(VmId id, SimTime now);
  /// idle -> busy until `until`
  void start_task(VmId id, SimTime now, SimTime until);
  /// busy -> idle
  void finish_task(VmId id, SimTime now);
  /// Terminates an idle instance; billing ends at `now` + deprovisioning delay.
  Money terminate(VmId id, SimTime now);

  /// Terminates every idle instance with now - idle_since >= idle_threshold.
  std::vector<VmInstance> idle_scan(SimTime now);

  const VmInstance& vm(VmId id) const { return vms_.at(id); }
  std::span<const VmInstance> instances() const { return vms_; }
  std::vector<VmId> idle_vms() const;
  std::size_t live_count() const { return live_; }
  std::size_t active_work_count() const;  // provisioning or busy
  Money total_billed() const;

 private:
  VmInstance& checked(VmId id, VmState expected, const char* op);

  CloudConfig config_;
  std::vector<VmInstance> vms_;
  std::size_t live_ = 0;
};

}  // namespace waas
