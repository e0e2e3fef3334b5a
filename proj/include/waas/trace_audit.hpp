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
#include <string>
#include <vector>

#include "waas/simulation.hpp"

namespace waas {

struct AuditResult {
  std::vector<std::string> violations;
  std::size_t checked = 0;  // intervals, starts or records examined
  SimTime max_observed{0};

  bool ok() const { return violations.empty(); }
  void merge(const AuditResult& other);
};

/// Trace times never decrease.
AuditResult audit_clock(const Trace& trace);

/// Every idle interval (idle record to the next start or terminate on the
/// same instance) is at most idle_threshold + scan_interval.
AuditResult audit_idle_bound(const Trace& trace, SimTime idle_threshold, SimTime scan_interval);

/// No task starts before all of its parents complete.
AuditResult audit_dependencies(const Trace& trace, const WorkloadSpec& workload);

/// No instance is assigned or started after its termination, and every
/// provisioned instance is terminated before the end record.
AuditResult audit_vm_lifecycle(const Trace& trace);

/// All of the above.
AuditResult audit_trace(const Trace& trace, const WorkloadSpec& workload, const CloudConfig& cloud);

}  // namespace waas
