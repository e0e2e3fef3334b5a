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

#include "waas/trace_audit.hpp"

#include <map>
#include <set>
#include <utility>

namespace waas {

void AuditResult::merge(const AuditResult& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  checked += other.checked;
  max_observed = std::max(max_observed, other.max_observed);
}

AuditResult audit_clock(const Trace& trace) {
  AuditResult res;
  SimTime last{0};
  for (const auto& r : trace.records) {
    ++res.checked;
    if (r.time < last) {
      res.violations.push_back("clock went backwards at " + std::to_string(r.time.count()) + "us (" +
                               std::string(to_string(r.kind)) + ")");
    }
    last = std::max(last, r.time);
  }
  return res;
}

AuditResult audit_idle_bound(const Trace& trace, SimTime idle_threshold, SimTime scan_interval) {
  AuditResult res;
  const SimTime bound = idle_threshold + scan_interval;
  std::map<VmId, SimTime> idle_since;
  auto close = [&](VmId vm, SimTime at) {
    auto it = idle_since.find(vm);
    if (it == idle_since.end()) return;
    const auto span = at - it->second;
    ++res.checked;
    res.max_observed = std::max(res.max_observed, span);
    if (span > bound) {
      res.violations.push_back("vm " + std::to_string(vm) + " idle for " + std::to_string(span.count()) +
                               "us (bound " + std::to_string(bound.count()) + "us)");
    }
    idle_since.erase(it);
  };
  for (const auto& r : trace.records) {
    if (!r.vm) continue;
    switch (r.kind) {
      case TraceKind::idle: idle_since[*r.vm] = r.time; break;
      case TraceKind::start:
      case TraceKind::terminate: close(*r.vm, r.time); break;
      default: break;
    }
  }
  for (const auto& [vm, since] : idle_since) {
    res.violations.push_back("vm " + std::to_string(vm) + " idle since " + std::to_string(since.count()) +
                             "us was never reused or terminated");
  }
  return res;
}

AuditResult audit_dependencies(const Trace& trace, const WorkloadSpec& workload) {
  AuditResult res;
  std::map<std::string, const WorkflowSpec*> specs;
  for (const auto& wf : workload.workflows) specs.emplace(wf.id(), &wf);
  std::map<std::pair<std::string, std::string>, SimTime> completed;
  for (const auto& r : trace.records) {
    if (r.kind == TraceKind::complete) {
      completed[{r.workflow, r.task}] = r.time;
      continue;
    }
    if (r.kind != TraceKind::start) continue;
    ++res.checked;
    auto it = specs.find(r.workflow);
    if (it == specs.end()) {
      res.violations.push_back("start of unknown workflow " + r.workflow);
      continue;
    }
    auto idx = it->second->find(r.task);
    if (!idx) {
      res.violations.push_back("start of unknown task " + r.workflow + "/" + r.task);
      continue;
    }
    for (auto p : it->second->task(*idx).parents) {
      const auto& pid = it->second->task(p).id;
      auto done = completed.find({r.workflow, pid});
      if (done == completed.end() || done->second > r.time) {
        res.violations.push_back(r.workflow + "/" + r.task + " started at " + std::to_string(r.time.count()) +
                                 "us before parent " + pid + " completed");
      }
    }
  }
  return res;
}

AuditResult audit_vm_lifecycle(const Trace& trace) {
  AuditResult res;
  std::set<VmId> provisioned;
  std::set<VmId> terminated;
  for (const auto& r : trace.records) {
    if (r.kind == TraceKind::end) {
      for (auto vm : provisioned) {
        if (!terminated.contains(vm)) {
          res.violations.push_back("vm " + std::to_string(vm) + " still leased at simulation end");
        }
      }
      continue;
    }
    if (!r.vm) continue;
    ++res.checked;
    const auto vm = *r.vm;
    switch (r.kind) {
      case TraceKind::provision: provisioned.insert(vm); break;
      case TraceKind::terminate:
        if (!terminated.insert(vm).second) res.violations.push_back("vm " + std::to_string(vm) + " terminated twice");
        break;
      case TraceKind::assign:
      case TraceKind::start:
      case TraceKind::vm_ready:
        if (terminated.contains(vm)) {
          res.violations.push_back("vm " + std::to_string(vm) + " received work after termination (" + r.workflow +
                                   "/" + r.task + ")");
        }
        break;
      default: break;
    }
  }
  return res;
}

AuditResult audit_trace(const Trace& trace, const WorkloadSpec& workload, const CloudConfig& cloud) {
  auto res = audit_clock(trace);
  res.merge(audit_idle_bound(trace, cloud.idle_threshold, cloud.scan_interval));
  res.merge(audit_dependencies(trace, workload));
  res.merge(audit_vm_lifecycle(trace));
  return res;
}

}  // namespace waas
