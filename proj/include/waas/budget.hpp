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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "waas/cloud.hpp"
#include "waas/estimator.hpp"
#include "waas/units.hpp"
#include "waas/workflow.hpp"

namespace waas {

/// Estimated runtime and cost of a task on each catalog type.
class CostModel {
 public:
  CostModel(std::span<const VmType> catalog, const Estimator& estimator);

  std::span<const VmType> catalog() const { return catalog_; }
  const Estimator& estimator() const { return *estimator_; }
  /// Fastest first.
  const std::vector<std::size_t>& by_speed() const { return by_speed_; }
  std::size_t fastest() const { return by_speed_.front(); }

  SimTime runtime(const TaskRecord& task, std::size_t type) const;
  Money cost(const TaskRecord& task, std::size_t type) const;
  /// Lowest estimated cost; ties go to the lower price, then the name.
  std::size_t cheapest_for(const TaskRecord& task) const;

 private:
  std::span<const VmType> catalog_;
  const Estimator* estimator_;
  std::vector<std::size_t> by_speed_;
  std::vector<std::size_t> by_price_;
};

/// Estimated finish time per task, relative to workflow start.
struct EftTable {
  std::vector<SimTime> finish;

  SimTime at(TaskIndex t) const { return finish.at(t); }
};

/// EFT(t) = max over parents EFT(p) + estimate(t, reference_type); entry
/// tasks start at zero. No communication term.
EftTable compute_eft(const WorkflowSpec& spec, const Estimator& estimator, const VmType& reference_type);

struct BudgetOptions {
  /// Keep enough of the pool to give every later task in the poll order its
  /// cheapest-type cost before upgrading the current task.
  bool reserve_for_remaining = true;
  /// Affordability uses the sub-budget alone instead of sub-budget + spare.
  bool strict_sub_budget = false;
};

struct TaskAllocation {
  TaskIndex task = 0;
  std::size_t type_index = 0;
  Money amount;
};

struct Distribution {
  std::vector<TaskAllocation> allocations;  // poll order
  Money residual;                           // left unassigned, >= 0
  Money shortfall;                          // allocated beyond the pool
};

/// Ascending level, then ascending EFT, then task id.
std::vector<TaskIndex> distribution_order(const WorkflowSpec& spec, std::span<const TaskIndex> tasks,
                                          const EftTable& eft);

/// Polls `tasks` in distribution order. Each gets the cost of the fastest
/// type it can afford from the remaining pool, or its cheapest-type cost when
/// nothing is affordable; whatever that overdraws is reported as shortfall.
Distribution distribute_budget(Money beta, const WorkflowSpec& spec, std::span<const TaskIndex> tasks,
                               const EftTable& eft, const CostModel& costs, const BudgetOptions& options = {});

/// Per-workflow budget state.
///
/// Identity kept after every operation:
///   original == spent + sum(sub_budgets) + unassigned + spare - debt
/// where sub_budgets covers every task that has not completed yet.
struct BudgetLedger {
  std::string workflow_id;
  Money original;
  Money unassigned;
  Money spare;
  Money spent;
  Money debt;
  std::map<TaskIndex, Money> sub_budgets;
  std::set<TaskIndex> unscheduled;
  std::vector<TaskIndex> last_order;

  Money sub_budget(TaskIndex t) const;
  Money committed() const;
  /// What a task may spend when it is placed on a VM.
  Money available_for(TaskIndex t, const BudgetOptions& options) const;
  /// Zero when the identity holds.
  Money balance_error() const;
};

/// Opens the ledger for a newly arrived workflow and distributes its whole budget.
BudgetLedger open_ledger(const WorkflowSpec& spec, const EftTable& eft, const CostModel& costs,
                         const BudgetOptions& options = {});

/// The task leaves the pool that later redistributions draw from.
void mark_scheduled(BudgetLedger& ledger, TaskIndex task);

struct BudgetUpdate {
  bool surplus = true;
  Money delta;  // surplus returned to the pool, or debt taken from it
  Money pool;   // amount redistributed to the unscheduled tasks
};

/// Settles a finished task against its sub-budget plus spare. A surplus goes
/// back to the pool and spare resets; a shortfall is deducted from the pool.
/// The pool (unscheduled sub-budgets + unassigned) is then redistributed.
/// With no unscheduled tasks left, a surplus stays as spare for in-flight
/// tasks. Throws IllegalStateError if the task holds no sub-budget.
BudgetUpdate update_budget(BudgetLedger& ledger, const WorkflowSpec& spec, TaskIndex finished, Money actual_cost,
                           const EftTable& eft, const CostModel& costs, const BudgetOptions& options = {});

}  // namespace waas
