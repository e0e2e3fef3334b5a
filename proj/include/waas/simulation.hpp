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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "waas/budget.hpp"
#include "waas/cloud.hpp"
#include "waas/estimator.hpp"
#include "waas/metrics.hpp"
#include "waas/scheduler.hpp"
#include "waas/workflow.hpp"

namespace waas {

namespace event {
struct WorkflowArrival {
  std::size_t workflow;
};
struct VmAvailable {
  VmId vm;
};
struct TaskCompleted {
  std::size_t workflow;
  TaskIndex task;
  VmId vm;
  SimTime runtime;
};
struct IdleScanTick {};
struct SimulationEnd {};
}  // namespace event

using EventPayload =
    std::variant<event::WorkflowArrival, event::VmAvailable, event::TaskCompleted, event::IdleScanTick, event::SimulationEnd>;

/// Processed in (time, seq) order; seq is assigned at enqueue.
struct SimEvent {
  SimTime time{0};
  std::uint64_t seq = 0;
  EventPayload payload;
};

enum class TraceKind { arrive, assign, provision, vm_ready, start, complete, budget, idle, terminate, workflow_done, end };

std::string_view to_string(TraceKind kind);

struct TraceRecord {
  SimTime time{0};
  TraceKind kind = TraceKind::end;
  std::string workflow;
  std::string task;
  std::optional<VmId> vm;
  std::string vm_type;
  SimTime duration{0};  // task runtime on complete, makespan on workflow_done
  Money amount;         // budget, estimated cost, task cost, bill or pool
  Money delta;          // budget surplus/debt
  std::string note;     // reuse|provision, surplus|debt
  std::int64_t count = 0;  // task count on arrive, billed seconds on terminate
};

struct Trace {
  std::vector<TraceRecord> records;
};

/// One line per record: `time_us<TAB>event<TAB>key=value...`.
std::string checkpoint_trace(const Trace& trace);
/// `time,workflow,task,vm_id,vm_type,event` for assign/start/complete records.
std::string assignment_log_csv(const Trace& trace);

struct SimStats {
  std::size_t arrivals = 0;
  std::size_t completions = 0;
  std::size_t scan_ticks = 0;
  std::size_t vm_available = 0;
  std::size_t events = 0;
  SimTime end_time{0};
};

struct SimulationOptions {
  SchedulerKind scheduler = SchedulerKind::ebpsm;
  CloudConfig cloud = default_cloud_config();
  EstimatorConfig estimator;
  BudgetOptions budget;
  std::uint64_t seed = 0;  // feeds the "variability" stream only
};

struct SimulationResult {
  MetricsReport report;
  Trace trace;
  SimStats stats;
  std::vector<VmInstance> vms;
  std::vector<ExecutionRecord> history;  // completions in order
};

using PolicyFactory = std::function<std::unique_ptr<SchedulingPolicy>(const CloudConfig&, const Estimator&)>;

/// Runs the workload to completion and drains the fleet.
/// Throws StallError when no pending event can finish the remaining tasks.
SimulationResult run_simulation(const WorkloadSpec& workload, const SimulationOptions& options);
/// Same with a caller-supplied policy in place of `options.scheduler`.
SimulationResult run_simulation(const WorkloadSpec& workload, const SimulationOptions& options,
                                const PolicyFactory& factory);

}  // namespace waas
