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

#include "waas/scheduler.hpp"

#include <tuple>

#include "waas/errors.hpp"

namespace waas {

bool ReadyQueue::Order::operator()(const ReadyEntry& a, const ReadyEntry& b) const {
  return std::tie(a.key, a.arrival, a.workflow, a.task_id) < std::tie(b.key, b.arrival, b.workflow, b.task_id);
}

void ReadyQueue::push(ReadyEntry entry) {
  if (!entries_.insert(std::move(entry)).second) throw IllegalStateError("task queued twice");
}

std::optional<ReadyEntry> ReadyQueue::poll() {
  if (entries_.empty()) return std::nullopt;
  auto node = entries_.extract(entries_.begin());
  return std::move(node.value());
}

std::vector<ReadyEntry> ReadyQueue::drain() {
  std::vector<ReadyEntry> out;
  out.reserve(entries_.size());
  while (auto e = poll()) out.push_back(std::move(*e));
  return out;
}

WorkflowRun::WorkflowRun(WorkflowSpec s)
    : spec(std::move(s)), start_time(spec.size()), finish_time(spec.size()), vm_of(spec.size()) {}

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::ebpsm: return "ebpsm";
    case SchedulerKind::ebpsm_homogeneous: return "ebpsm-homogeneous";
    case SchedulerKind::fcfs: return "fcfs";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(std::string_view name) {
  if (name == "ebpsm") return SchedulerKind::ebpsm;
  if (name == "ebpsm-homogeneous") return SchedulerKind::ebpsm_homogeneous;
  if (name == "fcfs") return SchedulerKind::fcfs;
  throw ConfigError("scheduler", "unknown scheduler '" + std::string(name) + "'");
}

bool requires_homogeneous(SchedulerKind kind) { return kind != SchedulerKind::ebpsm; }

std::vector<Assignment> schedule_ready(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                       const CostModel& costs, const BudgetOptions& options, SimTime now) {
  (void)now;
  std::vector<Assignment> out;
  std::set<VmId> claimed;
  const auto idle = fleet.idle_vms();
  for (auto& entry : queue.drain()) {
    auto& run = runs[entry.workflow];
    const auto& task = run.spec.task(entry.task);
    auto& ledger = run.ledger.value();
    const Money budget = ledger.available_for(entry.task, options);

    Assignment a{entry.workflow, entry.task, std::nullopt, 0, SimTime{0}, kZeroMoney};
    for (auto id : idle) {
      if (claimed.contains(id)) continue;
      const auto& vm = fleet.vm(id);
      const auto rt = costs.runtime(task, vm.type_index);
      const auto c = estimated_task_cost(vm.type, rt);
      if (c > budget) continue;
      if (!a.reuse || rt < a.estimated_runtime) {
        a.reuse = id;
        a.type_index = vm.type_index;
        a.estimated_runtime = rt;
        a.estimated_cost = c;
      }
    }
    if (a.reuse) {
      claimed.insert(*a.reuse);
    } else {
      std::optional<std::size_t> pick;
      for (auto k : costs.by_speed()) {
        if (costs.cost(task, k) <= budget) {
          pick = k;
          break;
        }
      }
      a.type_index = pick ? *pick : costs.cheapest_for(task);
      a.estimated_runtime = costs.runtime(task, a.type_index);
      a.estimated_cost = costs.cost(task, a.type_index);
    }
    mark_scheduled(ledger, entry.task);
    out.push_back(a);
  }
  return out;
}

Assignment fcfs_schedule(const ReadyEntry& entry, const WorkflowRun& run, const Fleet& fleet, const Estimator& estimator) {
  const auto& type = fleet.config().catalog.front();
  const auto rt = estimator.estimate(run.spec.task(entry.task), type);
  return {entry.workflow, entry.task, std::nullopt, 0, rt, estimated_task_cost(type, rt)};
}

Assignment ebpsm_homogeneous_schedule(const ReadyEntry& entry, const WorkflowRun& run, const Fleet& fleet,
                                      const Estimator& estimator, const std::set<VmId>& claimed) {
  const auto& type = fleet.config().catalog.front();
  const auto rt = estimator.estimate(run.spec.task(entry.task), type);
  Assignment a{entry.workflow, entry.task, std::nullopt, 0, rt, estimated_task_cost(type, rt)};
  for (auto id : fleet.idle_vms()) {
    if (!claimed.contains(id)) {
      a.reuse = id;
      break;
    }
  }
  return a;
}

namespace {

void require_single_type(SchedulerKind kind, const CloudConfig& cloud) {
  if (cloud.catalog.size() != 1) {
    throw ConfigError("cloud.catalog", std::string(to_string(kind)) + " requires a homogeneous catalog (one VM type), got " +
                                           std::to_string(cloud.catalog.size()));
  }
}

class EbpsmPolicy final : public SchedulingPolicy {
 public:
  EbpsmPolicy(const CloudConfig& cloud, const Estimator& estimator, BudgetOptions options)
      : catalog_(cloud.catalog), estimator_(estimator), costs_(catalog_, estimator), options_(options) {}

  std::string_view name() const override { return "ebpsm"; }

  void on_arrival(WorkflowRun& run, SimTime) override {
    run.eft = compute_eft(run.spec, estimator_, catalog_[costs_.fastest()]);
    run.ledger = open_ledger(run.spec, run.eft, costs_, options_);
  }

  SimTime queue_key(const WorkflowRun& run, TaskIndex task, SimTime) const override {
    return run.spec.arrival_time() + run.eft.at(task);
  }

  std::vector<Assignment> schedule(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                   SimTime now) override {
    return schedule_ready(queue, runs, fleet, costs_, options_, now);
  }

  std::optional<BudgetUpdate> on_completed(WorkflowRun& run, TaskIndex task, Money actual_cost, SimTime) override {
    return update_budget(*run.ledger, run.spec, task, actual_cost, run.eft, costs_, options_);
  }

 private:
  std::vector<VmType> catalog_;
  const Estimator& estimator_;
  CostModel costs_;
  BudgetOptions options_;
};

class HomogeneousEbpsmPolicy final : public SchedulingPolicy {
 public:
  HomogeneousEbpsmPolicy(const CloudConfig& cloud, const Estimator& estimator)
      : type_(cloud.catalog.front()), estimator_(estimator) {}

  std::string_view name() const override { return "ebpsm-homogeneous"; }

  void on_arrival(WorkflowRun& run, SimTime) override { run.eft = compute_eft(run.spec, estimator_, type_); }

  SimTime queue_key(const WorkflowRun& run, TaskIndex task, SimTime) const override {
    return run.spec.arrival_time() + run.eft.at(task);
  }

  std::vector<Assignment> schedule(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                   SimTime) override {
    std::vector<Assignment> out;
    std::set<VmId> claimed;
    for (auto& entry : queue.drain()) {
      auto a = ebpsm_homogeneous_schedule(entry, runs[entry.workflow], fleet, estimator_, claimed);
      if (a.reuse) claimed.insert(*a.reuse);
      out.push_back(a);
    }
    return out;
  }

 private:
  VmType type_;
  const Estimator& estimator_;
};

class FcfsPolicy final : public SchedulingPolicy {
 public:
  explicit FcfsPolicy(const Estimator& estimator) : estimator_(estimator) {}

  std::string_view name() const override { return "fcfs"; }
  void on_arrival(WorkflowRun&, SimTime) override {}
  SimTime queue_key(const WorkflowRun&, TaskIndex, SimTime now) const override { return now; }

  std::vector<Assignment> schedule(ReadyQueue& queue, std::span<WorkflowRun> runs, const Fleet& fleet,
                                   SimTime) override {
    std::vector<Assignment> out;
    for (auto& entry : queue.drain()) out.push_back(fcfs_schedule(entry, runs[entry.workflow], fleet, estimator_));
    return out;
  }

  bool dedicated_vms() const override { return true; }

 private:
  const Estimator& estimator_;
};

}  // namespace

std::unique_ptr<SchedulingPolicy> make_policy(SchedulerKind kind, const CloudConfig& cloud, const Estimator& estimator,
                                              const BudgetOptions& options) {
  switch (kind) {
    case SchedulerKind::ebpsm: return std::make_unique<EbpsmPolicy>(cloud, estimator, options);
    case SchedulerKind::ebpsm_homogeneous:
      require_single_type(kind, cloud);
      return std::make_unique<HomogeneousEbpsmPolicy>(cloud, estimator);
    case SchedulerKind::fcfs:
      require_single_type(kind, cloud);
      return std::make_unique<FcfsPolicy>(estimator);
  }
  throw ConfigError("scheduler", "unknown scheduler");
}

}  // namespace waas
