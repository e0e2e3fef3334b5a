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

#include "waas/budget.hpp"

#include <algorithm>
#include <numeric>

#include "waas/errors.hpp"

namespace waas {

CostModel::CostModel(std::span<const VmType> catalog, const Estimator& estimator)
    : catalog_(catalog), estimator_(&estimator), by_speed_(types_by_speed(catalog)) {
  if (catalog.empty()) throw ArgumentError("CostModel: empty catalog");
  by_price_.resize(catalog.size());
  std::iota(by_price_.begin(), by_price_.end(), std::size_t{0});
  std::sort(by_price_.begin(), by_price_.end(), [catalog](std::size_t a, std::size_t b) {
    if (catalog[a].price_per_second != catalog[b].price_per_second)
      return catalog[a].price_per_second < catalog[b].price_per_second;
    return catalog[a].name < catalog[b].name;
  });
}

SimTime CostModel::runtime(const TaskRecord& task, std::size_t type) const {
  return estimator_->estimate(task, catalog_[type]);
}

Money CostModel::cost(const TaskRecord& task, std::size_t type) const {
  return estimated_task_cost(catalog_[type], runtime(task, type));
}

std::size_t CostModel::cheapest_for(const TaskRecord& task) const {
  std::size_t best = by_price_.front();
  Money best_cost = cost(task, best);
  for (auto k : by_price_) {
    const auto c = cost(task, k);
    if (c < best_cost) {
      best = k;
      best_cost = c;
    }
  }
  return best;
}

EftTable compute_eft(const WorkflowSpec& spec, const Estimator& estimator, const VmType& reference_type) {
  // Levels give a topological order.
  std::vector<TaskIndex> order(spec.size());
  std::iota(order.begin(), order.end(), TaskIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&spec](TaskIndex a, TaskIndex b) { return spec.task(a).level < spec.task(b).level; });
  EftTable eft;
  eft.finish.assign(spec.size(), SimTime{0});
  for (auto t : order) {
    SimTime start{0};
    for (auto p : spec.task(t).parents) start = std::max(start, eft.finish[p]);
    eft.finish[t] = start + estimator.estimate(spec.task(t), reference_type);
  }
  return eft;
}

std::vector<TaskIndex> distribution_order(const WorkflowSpec& spec, std::span<const TaskIndex> tasks,
                                          const EftTable& eft) {
  std::vector<TaskIndex> order(tasks.begin(), tasks.end());
  std::sort(order.begin(), order.end(), [&](TaskIndex a, TaskIndex b) {
    const auto& x = spec.task(a);
    const auto& y = spec.task(b);
    if (x.level != y.level) return x.level < y.level;
    if (eft.at(a) != eft.at(b)) return eft.at(a) < eft.at(b);
    return x.id < y.id;
  });
  return order;
}

Distribution distribute_budget(Money beta, const WorkflowSpec& spec, std::span<const TaskIndex> tasks,
                               const EftTable& eft, const CostModel& costs, const BudgetOptions& options) {
  if (beta < kZeroMoney) throw ArgumentError("distribute_budget: beta must be >= 0");
  const auto order = distribution_order(spec, tasks, eft);

  std::vector<Money> floor_cost(order.size());
  Money reserve;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& task = spec.task(order[i]);
    floor_cost[i] = costs.cost(task, costs.cheapest_for(task));
    reserve += floor_cost[i];
  }

  Distribution out;
  Money remaining = beta;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& task = spec.task(order[i]);
    reserve -= floor_cost[i];
    const Money headroom = options.reserve_for_remaining ? remaining - reserve : remaining;

    std::optional<std::size_t> chosen;
    Money amount;
    for (auto k : costs.by_speed()) {
      const auto c = costs.cost(task, k);
      if (c <= headroom) {
        chosen = k;
        amount = c;
        break;
      }
    }
    if (!chosen) {
      chosen = costs.cheapest_for(task);
      amount = floor_cost[i];
    }
    if (amount <= remaining) {
      remaining -= amount;
    } else {
      out.shortfall += amount - remaining;
      remaining = kZeroMoney;
    }
    out.allocations.push_back({order[i], *chosen, amount});
  }
  out.residual = remaining;
  return out;
}

Money BudgetLedger::sub_budget(TaskIndex t) const {
  auto it = sub_budgets.find(t);
  if (it == sub_budgets.end()) {
    throw IllegalStateError("workflow " + workflow_id + ": task " + std::to_string(t) + " holds no sub-budget");
  }
  return it->second;
}

Money BudgetLedger::committed() const {
  Money total;
  for (const auto& [t, b] : sub_budgets) total += b;
  return total;
}

Money BudgetLedger::available_for(TaskIndex t, const BudgetOptions& options) const {
  return options.strict_sub_budget ? sub_budget(t) : sub_budget(t) + spare;
}

Money BudgetLedger::balance_error() const { return original - (spent + committed() + unassigned + spare - debt); }

namespace {

void apply_distribution(BudgetLedger& ledger, const Distribution& d) {
  ledger.last_order.clear();
  for (const auto& a : d.allocations) {
    ledger.sub_budgets[a.task] = a.amount;
    ledger.last_order.push_back(a.task);
  }
  ledger.unassigned = d.residual;
  ledger.debt += d.shortfall;
}

}  // namespace

BudgetLedger open_ledger(const WorkflowSpec& spec, const EftTable& eft, const CostModel& costs,
                         const BudgetOptions& options) {
  BudgetLedger ledger;
  ledger.workflow_id = spec.id();
  ledger.original = spec.budget();
  std::vector<TaskIndex> all(spec.size());
  std::iota(all.begin(), all.end(), TaskIndex{0});
  ledger.unscheduled.insert(all.begin(), all.end());
  apply_distribution(ledger, distribute_budget(spec.budget(), spec, all, eft, costs, options));
  return ledger;
}

void mark_scheduled(BudgetLedger& ledger, TaskIndex task) {
  if (ledger.unscheduled.erase(task) == 0) {
    throw IllegalStateError("workflow " + ledger.workflow_id + ": task " + std::to_string(task) +
                            " is not awaiting scheduling");
  }
}

BudgetUpdate update_budget(BudgetLedger& ledger, const WorkflowSpec& spec, TaskIndex finished, Money actual_cost,
                           const EftTable& eft, const CostModel& costs, const BudgetOptions& options) {
  if (ledger.unscheduled.contains(finished)) {
    throw IllegalStateError("workflow " + ledger.workflow_id + ": task " + std::to_string(finished) +
                            " finished without being scheduled");
  }
  const Money sub = ledger.sub_budget(finished);
  const Money available = sub + ledger.spare;
  ledger.sub_budgets.erase(finished);
  ledger.spent += actual_cost;
  ledger.spare = kZeroMoney;

  Money pool = ledger.unassigned;
  for (auto t : ledger.unscheduled) pool += ledger.sub_budgets.at(t);

  BudgetUpdate update;
  if (actual_cost <= available) {
    update.surplus = true;
    update.delta = available - actual_cost;
    if (ledger.unscheduled.empty()) {
      ledger.spare = update.delta;
    } else {
      pool += update.delta;
    }
  } else {
    update.surplus = false;
    update.delta = actual_cost - available;
    pool -= update.delta;
    if (pool < kZeroMoney) {
      ledger.debt += -pool;
      pool = kZeroMoney;
    }
  }

  update.pool = pool;
  if (ledger.unscheduled.empty()) {
    ledger.unassigned = pool;
    ledger.last_order.clear();
  } else {
    for (auto t : ledger.unscheduled) ledger.sub_budgets.erase(t);
    std::vector<TaskIndex> pending(ledger.unscheduled.begin(), ledger.unscheduled.end());
    apply_distribution(ledger, distribute_budget(pool, spec, pending, eft, costs, options));
  }
  return update;
}

}  // namespace waas
