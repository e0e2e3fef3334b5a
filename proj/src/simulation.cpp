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

#include "waas/simulation.hpp"

#include <algorithm>
#include <cstdio>
#include <queue>
#include <sstream>

#include "waas/errors.hpp"
#include "waas/rng.hpp"

namespace waas {

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::arrive: return "arrive";
    case TraceKind::assign: return "assign";
    case TraceKind::provision: return "provision";
    case TraceKind::vm_ready: return "vm_ready";
    case TraceKind::start: return "start";
    case TraceKind::complete: return "complete";
    case TraceKind::budget: return "budget";
    case TraceKind::idle: return "idle";
    case TraceKind::terminate: return "terminate";
    case TraceKind::workflow_done: return "workflow_done";
    case TraceKind::end: return "end";
  }
  return "?";
}

std::string checkpoint_trace(const Trace& trace) {
  std::ostringstream out;
  for (const auto& r : trace.records) {
    out << r.time.count() << '\t' << to_string(r.kind);
    auto field = [&out](const char* key, const auto& value) { out << '\t' << key << '=' << value; };
    auto wf_task = [&] {
      field("wf", r.workflow);
      field("task", r.task);
    };
    switch (r.kind) {
      case TraceKind::arrive:
        field("wf", r.workflow);
        field("tasks", r.count);
        field("budget", r.amount.to_string(12));
        break;
      case TraceKind::assign:
        wf_task();
        field("mode", r.note);
        field("vm", *r.vm);
        field("type", r.vm_type);
        field("est_us", r.duration.count());
        field("est_cost", r.amount.to_string(12));
        break;
      case TraceKind::provision:
        field("vm", *r.vm);
        field("type", r.vm_type);
        field("ready_us", r.duration.count());
        break;
      case TraceKind::vm_ready:
      case TraceKind::idle:
        field("vm", *r.vm);
        break;
      case TraceKind::start:
        wf_task();
        field("vm", *r.vm);
        break;
      case TraceKind::complete:
        wf_task();
        field("vm", *r.vm);
        field("runtime_us", r.duration.count());
        field("cost", r.amount.to_string(12));
        break;
      case TraceKind::budget:
        wf_task();
        field("branch", r.note);
        field("delta", r.delta.to_string(12));
        field("pool", r.amount.to_string(12));
        break;
      case TraceKind::terminate:
        field("vm", *r.vm);
        field("type", r.vm_type);
        field("billed_s", r.count);
        field("bill", r.amount.to_string(12));
        break;
      case TraceKind::workflow_done:
        field("wf", r.workflow);
        field("makespan_us", r.duration.count());
        field("cost", r.amount.to_string(12));
        break;
      case TraceKind::end: break;
    }
    out << '\n';
  }
  return out.str();
}

std::string assignment_log_csv(const Trace& trace) {
  std::ostringstream out;
  out << "time,workflow,task,vm_id,vm_type,event\n";
  std::vector<std::string> vm_types;
  for (const auto& r : trace.records) {
    if (r.vm && r.kind == TraceKind::assign) {
      if (vm_types.size() <= *r.vm) vm_types.resize(*r.vm + 1);
      vm_types[*r.vm] = r.vm_type;
    }
    if (r.kind != TraceKind::assign && r.kind != TraceKind::start && r.kind != TraceKind::complete) continue;
    char t[40];
    std::snprintf(t, sizeof t, "%lld.%06lld", static_cast<long long>(r.time.count() / kMicrosPerSecond),
                  static_cast<long long>(r.time.count() % kMicrosPerSecond));
    out << t << ',' << r.workflow << ',' << r.task << ',' << *r.vm << ',' << vm_types[*r.vm] << ','
        << to_string(r.kind) << '\n';
  }
  return out.str();
}

namespace {

struct Later {
  bool operator()(const SimEvent& a, const SimEvent& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Engine {
 public:
  Engine(const WorkloadSpec& workload, const SimulationOptions& options, const PolicyFactory& factory)
      : workload_(workload),
        options_(options),
        fleet_(options.cloud),
        estimator_(options.estimator, options.cloud.catalog),
        variability_rng_(Rng::substream(options.seed, "variability")) {
    for (std::size_t i = 1; i < workload.workflows.size(); ++i) {
      if (workload.workflows[i].arrival_time() < workload.workflows[i - 1].arrival_time()) {
        throw ArgumentError("workload arrivals must be non-decreasing");
      }
    }
    estimator_.register_workload(workload);
    policy_ = factory(fleet_.config(), estimator_);
    runs_.reserve(workload.workflows.size());
    for (const auto& wf : workload.workflows) runs_.emplace_back(wf);
  }

  SimulationResult run() {
    for (std::size_t i = 0; i < runs_.size(); ++i) push(runs_[i].spec.arrival_time(), event::WorkflowArrival{i});
    if (!runs_.empty()) push(options_.cloud.scan_interval, event::IdleScanTick{});
    if (runs_.empty()) push(SimTime{0}, event::SimulationEnd{});

    bool ended = false;
    while (!events_.empty() && !ended) {
      SimEvent ev = events_.top();
      events_.pop();
      if (ev.time < clock_) throw IllegalStateError("event scheduled in the past");
      clock_ = ev.time;
      ++stats_.events;
      if (!std::holds_alternative<event::IdleScanTick>(ev.payload)) --pending_work_events_;

      std::visit([this, &ended](const auto& payload) { ended = handle(payload); }, ev.payload);
      if (ended) break;

      if (!end_queued_ && finished()) {
        push(clock_, event::SimulationEnd{});
        end_queued_ = true;
      }
      if (!end_queued_) check_stall();
    }
    return collect();
  }

 private:
  template <typename Payload>
  void push(SimTime at, Payload p) {
    if (!std::is_same_v<Payload, event::IdleScanTick>) ++pending_work_events_;
    events_.push(SimEvent{at, next_seq_++, EventPayload{std::move(p)}});
  }

  bool finished() const {
    return arrived_ == runs_.size() && done_ == runs_.size() && fleet_.live_count() == 0;
  }

  void check_stall() const {
    if (arrived_ < runs_.size() || done_ == runs_.size()) return;
    if (pending_work_events_ == 0 && fleet_.active_work_count() == 0) {
      std::size_t left = 0;
      for (const auto& r : runs_) left += r.spec.size() - r.completed_tasks;
      throw StallError("simulation stalled at t=" + std::to_string(clock_.count()) + "us with " + std::to_string(left) +
                       " unfinished tasks and no pending work");
    }
  }

  TraceRecord& trace(TraceKind kind) {
    trace_.records.push_back({});
    auto& r = trace_.records.back();
    r.time = clock_;
    r.kind = kind;
    return r;
  }

  void release(std::size_t wf, TaskIndex t) {
    auto& run = runs_[wf];
    auto& task = run.spec.mutable_task(t);
    task.advance(TaskState::ready);
    queue_.push({policy_->queue_key(run, t, clock_), run.spec.arrival_time(), wf, task.id, t});
    task.advance(TaskState::queued);
  }

  bool handle(const event::WorkflowArrival& ev) {
    ++stats_.arrivals;
    ++arrived_;
    auto& run = runs_[ev.workflow];
    policy_->on_arrival(run, clock_);
    auto& r = trace(TraceKind::arrive);
    r.workflow = run.spec.id();
    r.count = static_cast<std::int64_t>(run.spec.size());
    r.amount = run.spec.budget();
    for (auto t : run.spec.entry_tasks()) release(ev.workflow, t);
    schedule_round();
    return false;
  }

  bool handle(const event::VmAvailable& ev) {
    ++stats_.vm_available;
    fleet_.make_available(ev.vm, clock_);
    trace(TraceKind::vm_ready).vm = ev.vm;
    auto it = bound_.find(ev.vm);
    if (it != bound_.end()) {
      auto [wf, task] = it->second;
      bound_.erase(it);
      start(wf, task, ev.vm);
    } else {
      trace(TraceKind::idle).vm = ev.vm;
    }
    return false;
  }

  bool handle(const event::TaskCompleted& ev) {
    ++stats_.completions;
    auto& run = runs_[ev.workflow];
    auto& task = run.spec.mutable_task(ev.task);
    const auto& vm = fleet_.vm(ev.vm);
    const Money actual = estimated_task_cost(vm.type, ev.runtime);

    fleet_.finish_task(ev.vm, clock_);
    task.advance(TaskState::completed);
    run.finish_time[ev.task] = clock_;
    run.cost += actual;
    ExecutionRecord rec{task.kind, vm.type.name, ev.runtime, clock_};
    history_.push_back(rec);
    estimator_.record(std::move(rec));
    {
      auto& r = trace(TraceKind::complete);
      r.workflow = run.spec.id();
      r.task = task.id;
      r.vm = ev.vm;
      r.duration = ev.runtime;
      r.amount = actual;
    }

    if (auto upd = policy_->on_completed(run, ev.task, actual, clock_)) {
      auto& r = trace(TraceKind::budget);
      r.workflow = run.spec.id();
      r.task = task.id;
      r.note = upd->surplus ? "surplus" : "debt";
      r.delta = upd->delta;
      r.amount = upd->pool;
    }

    for (auto c : task.children) {
      const auto& child = run.spec.task(c);
      const bool ready = std::all_of(child.parents.begin(), child.parents.end(), [&run](TaskIndex p) {
        return run.spec.task(p).state == TaskState::completed;
      });
      if (ready) release(ev.workflow, c);
    }

    if (++run.completed_tasks == run.spec.size()) {
      run.finished_at = clock_;
      ++done_;
      auto& r = trace(TraceKind::workflow_done);
      r.workflow = run.spec.id();
      r.duration = clock_ - run.spec.arrival_time();
      r.amount = run.cost;
    }

    trace(TraceKind::idle).vm = ev.vm;
    if (policy_->dedicated_vms()) terminate(ev.vm);
    schedule_round();
    return false;
  }

  bool handle(const event::IdleScanTick&) {
    ++stats_.scan_ticks;
    for (const auto& vm : fleet_.idle_scan(clock_)) trace_terminate(vm);
    if (!finished()) push(clock_ + options_.cloud.scan_interval, event::IdleScanTick{});
    return false;
  }

  bool handle(const event::SimulationEnd&) {
    trace(TraceKind::end);
    return true;
  }

  void terminate(VmId id) {
    fleet_.terminate(id, clock_);
    trace_terminate(fleet_.vm(id));
  }

  void trace_terminate(const VmInstance& vm) {
    auto& r = trace(TraceKind::terminate);
    r.vm = vm.id;
    r.vm_type = vm.type.name;
    r.count = vm.billed_seconds;
    r.amount = vm.bill;
  }

  void schedule_round() {
    if (queue_.empty()) return;
    // A task the policy drops has no event left to revive it; check_stall reports that.
    auto assignments = policy_->schedule(queue_, runs_, fleet_, clock_);
    for (const auto& a : assignments) {
      auto& run = runs_[a.workflow];
      auto& task = run.spec.mutable_task(a.task);
      task.advance(TaskState::scheduled);
      VmId vm_id = 0;
      if (a.reuse) {
        vm_id = *a.reuse;
      } else {
        vm_id = fleet_.provision(a.type_index, clock_).id;
      }
      const auto& vm = fleet_.vm(vm_id);
      {
        auto& r = trace(TraceKind::assign);
        r.workflow = run.spec.id();
        r.task = task.id;
        r.note = a.reuse ? "reuse" : "provision";
        r.vm = vm_id;
        r.vm_type = vm.type.name;
        r.duration = a.estimated_runtime;
        r.amount = a.estimated_cost;
      }
      if (a.reuse) {
        start(a.workflow, a.task, vm_id);
      } else {
        auto& r = trace(TraceKind::provision);
        r.vm = vm_id;
        r.vm_type = vm.type.name;
        r.duration = vm.available_at;
        bound_.emplace(vm_id, std::pair{a.workflow, a.task});
        push(vm.available_at, event::VmAvailable{vm_id});
      }
    }
  }

  void start(std::size_t wf, TaskIndex t, VmId vm_id) {
    auto& run = runs_[wf];
    auto& task = run.spec.mutable_task(t);
    const auto& vm = fleet_.vm(vm_id);
    const auto runtime =
        task_runtime_on(vm.type, task.reference_runtime, options_.cloud.variability, variability_rng_, task.transfer_time);
    fleet_.start_task(vm_id, clock_, clock_ + runtime);
    task.advance(TaskState::running);
    run.start_time[t] = clock_;
    run.vm_of[t] = vm_id;
    auto& r = trace(TraceKind::start);
    r.workflow = run.spec.id();
    r.task = task.id;
    r.vm = vm_id;
    push(clock_ + runtime, event::TaskCompleted{wf, t, vm_id, runtime});
  }

  SimulationResult collect() {
    SimulationResult out;
    stats_.end_time = clock_;
    auto& rep = out.report;
    rep.scheduler = std::string(policy_->name());
    rep.workload_hash = workload_hash(workload_);
    rep.seed = options_.seed;
    for (const auto& run : runs_) {
      WorkflowMetrics m;
      m.id = run.spec.id();
      m.template_name = run.spec.template_name();
      m.tasks = run.spec.size();
      m.arrival = run.spec.arrival_time();
      m.finish = run.finished_at.value_or(SimTime{0});
      m.makespan = m.finish - m.arrival;
      m.budget = run.spec.budget();
      m.cost = run.cost;
      m.budget_met = m.cost <= m.budget;
      m.cost_per_budget = cost_per_budget(m.cost, m.budget);
      rep.workflows.push_back(std::move(m));
    }
    auto& fleet = rep.fleet;
    for (const auto& t : options_.cloud.catalog) fleet.vm_count_by_type[t.name] = 0;
    SimTime busy{0};
    for (const auto& vm : fleet_.instances()) {
      ++fleet.vm_count_by_type[vm.type.name];
      ++fleet.vm_count;
      busy += vm.busy_time;
      fleet.billed_seconds += vm.billed_seconds;
      fleet.total_cost += vm.bill;
    }
    fleet.busy_seconds = to_seconds(busy);
    fleet.utilization_pct =
        fleet.billed_seconds > 0 ? 100.0 * fleet.busy_seconds / static_cast<double>(fleet.billed_seconds) : 0.0;
    out.trace = std::move(trace_);
    out.stats = stats_;
    out.vms.assign(fleet_.instances().begin(), fleet_.instances().end());
    out.history = std::move(history_);
    return out;
  }

  const WorkloadSpec& workload_;
  const SimulationOptions& options_;
  Fleet fleet_;
  RuntimeEstimator estimator_;
  std::unique_ptr<SchedulingPolicy> policy_;
  Rng variability_rng_;
  std::vector<WorkflowRun> runs_;
  ReadyQueue queue_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> events_;
  std::map<VmId, std::pair<std::size_t, TaskIndex>> bound_;
  std::uint64_t next_seq_ = 0;
  std::int64_t pending_work_events_ = 0;
  SimTime clock_{0};
  std::size_t arrived_ = 0;
  std::size_t done_ = 0;
  bool end_queued_ = false;
  Trace trace_;
  SimStats stats_;
  std::vector<ExecutionRecord> history_;
};

}  // namespace

SimulationResult run_simulation(const WorkloadSpec& workload, const SimulationOptions& options,
                                const PolicyFactory& factory) {
  options.cloud.validate();
  options.estimator.validate();
  Engine engine(workload, options, factory);
  return engine.run();
}

SimulationResult run_simulation(const WorkloadSpec& workload, const SimulationOptions& options) {
  if (requires_homogeneous(options.scheduler) && options.cloud.catalog.size() != 1) {
    throw ConfigError("cloud.catalog", std::string(to_string(options.scheduler)) +
                                           " requires a homogeneous catalog (one VM type)");
  }
  return run_simulation(workload, options, [&options](const CloudConfig& cloud, const Estimator& estimator) {
    return make_policy(options.scheduler, cloud, estimator, options.budget);
  });
}

}  // namespace waas
