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
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "waas/units.hpp"

namespace waas {

struct WorkflowMetrics {
  std::string id;
  std::string template_name;
  std::size_t tasks = 0;
  SimTime arrival{0};
  SimTime finish{0};
  SimTime makespan{0};
  Money budget;
  Money cost;
  bool budget_met = true;
  double cost_per_budget = 0.0;  // +inf for a zero budget with non-zero cost
};

struct FleetMetrics {
  std::map<std::string, std::size_t> vm_count_by_type;
  std::size_t vm_count = 0;
  double busy_seconds = 0.0;
  std::int64_t billed_seconds = 0;
  double utilization_pct = 0.0;  // busy / billed lease seconds
  Money total_cost;
};

struct MetricsReport {
  std::string scheduler;
  std::uint64_t workload_hash = 0;
  std::uint64_t seed = 0;
  std::vector<WorkflowMetrics> workflows;
  FleetMetrics fleet;

  std::size_t budget_met_count() const;
  Money workflow_cost_total() const;
  double mean_makespan_seconds() const;
};

double cost_per_budget(Money cost, Money budget);

nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

/// Header plus one row per workflow; money with 9 decimals, seconds with 6.
std::string workflows_csv(const MetricsReport& report);

}  // namespace waas
