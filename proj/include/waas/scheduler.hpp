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
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "waas/budget.hpp"
#include "waas/cloud.hpp"
#include "waas/estimator.hpp"
#include "waas/workflow.hpp"

namespace waas {

/// Queued ready task. Ordered by (key, arrival of owning workflow, workflow
/// position, task id); the key is the absolute EFT for EBPSM and the release
/// time for FCFS.
struct ReadyEntry {
  SimTime key{0};
  SimTime arrival{0};
  std::size_t workflow = 0;
  std::string task_id;
  TaskIndex task = 0;
};

class ReadyQueue {
 public:
  void push(ReadyEntry entry);
  std::optional<ReadyEntry> poll();
  /// Removes and returns everything in poll order.
  std::vector<ReadyEntry> drain();
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  struct Order {
    bool operator()(const ReadyEntry& a, const ReadyEntry& b) const;
  };
  std::set<ReadyEntry, Order> entries_;
};

/// Live state of one submitted workflow inside a simulation.
struct WorkflowRun {
  WorkflowSpec spec;
  EftTable eft;
  std::optional<BudgetLedger> ledger;
  std::size_t completed_tasks = 0;
  std::optional<SimTime> finished_at;
  Money cost;  // busy seconds charged per task
  std::vector<std::optional<SimTime>> start_time;
  std::vector<std::optional<SimTime>> finish_time;
  std::vector<std::optional<VmId>> vm_of;

  explicit WorkflowRun(WorkflowSpec s);
  bool done() const { return completed_tasks == spec.size(); }
};

/// Decision for one queued task: reuse an idle instance or lease a new one.
struct Assignment {
  std::size_t workflow = 0;
  TaskIndex task = 0;
  std::optional<VmId> reuse;
  std::size_t type_index = 0;  // type to provision when !reuse
  SimTime estimated_runtime{0};
  Money estimated_cost;
};

enum class SchedulerKind { ebpsm, ebpsm_homogeneous, fcfs };

std::string_view to_string(SchedulerKind kind);
/// `ebpsm`, `ebpsm-homogeneous` or `fcfs`; ConfigError otherwise.
SchedulerKind parse_scheduler_kind(std::string_view name);
bool requires_homogeneous(SchedulerKind kind);

class SchedulingPolicy {
 public:
  virtual ~SchedulingPolicy() = default;

  virtual std::string_view name() const = 0;
  virtual void on_arrival(WorkflowRun& run, SimTime now) = 0;
  virtual SimTime queue_key(const WorkflowRun& run, TaskIndex task, SimTime now) const = 0;
  /// Consumes the queue. Every polled task receives exactly one assignment.
  virtual std::vector<Assignment> schedule(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                           SimTime now) = 0;
  virtual std::optional<BudgetUpdate> on_completed(WorkflowRun& run, TaskIndex task, Money actual_cost, SimTime now) {
    (void)run, (void)task, (void)actual_cost, (void)now;
    return std::nullopt;
  }
  /// Terminate each instance as soon as its task finishes.
  virtual bool dedicated_vms() const { return false; }
};

/// EBPSM placement for one drained queue: per task in poll order, the idle
/// instance with the shortest estimated runtime whose estimated cost fits the
/// task's budget (ties to the lower id), else the fastest affordable type,
/// else the cheapest type. Marks each task scheduled in its ledger.
std::vector<Assignment> schedule_ready(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                       const CostModel& costs, const BudgetOptions& options, SimTime now);

/// Always a fresh instance of the single catalog type.
Assignment fcfs_schedule(const ReadyEntry& entry, const WorkflowRun& run, const Fleet& fleet, const Estimator& estimator);

/// Lowest-id idle instance not in `claimed`, else a new instance of the single type.
Assignment ebpsm_homogeneous_schedule(const ReadyEntry& entry, const WorkflowRun& run, const Fleet& fleet,
                                      const Estimator& estimator, const std::set<VmId>& claimed);

/// Throws ConfigError when a homogeneous-only scheduler meets a multi-type catalog.
std::unique_ptr<SchedulingPolicy> make_policy(SchedulerKind kind, const CloudConfig& cloud, const Estimator& estimator,
                                              const BudgetOptions& options = {});

}  // namespace waas
