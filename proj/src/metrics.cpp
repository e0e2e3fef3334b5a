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

#include "waas/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "waas/errors.hpp"

namespace waas {

using nlohmann::json;

std::size_t MetricsReport::budget_met_count() const {
  std::size_t n = 0;
  for (const auto& w : workflows) n += w.budget_met ? 1 : 0;
  return n;
}

Money MetricsReport::workflow_cost_total() const {
  Money total;
  for (const auto& w : workflows) total += w.cost;
  return total;
}

double MetricsReport::mean_makespan_seconds() const {
  if (workflows.empty()) return 0.0;
  double sum = 0;
  for (const auto& w : workflows) sum += to_seconds(w.makespan);
  return sum / static_cast<double>(workflows.size());
}

double cost_per_budget(Money cost, Money budget) {
  if (budget == kZeroMoney) return cost == kZeroMoney ? 0.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(cost.picos()) / static_cast<double>(budget.picos());
}

namespace {

std::string seconds_str(SimTime t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(t.count() / kMicrosPerSecond),
                static_cast<long long>(t.count() % kMicrosPerSecond));
  return buf;
}

std::string ratio_str(double r) {
  if (std::isinf(r)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", r);
  return buf;
}

}  // namespace

json to_json(const MetricsReport& report) {
  json doc = json::object();
  doc["scheduler"] = report.scheduler;
  // Hex string: JSON numbers above 2^53 do not survive every reader.
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(report.workload_hash));
  doc["workload_hash"] = hash;
  doc["seed"] = report.seed;
  json wfs = json::array();
  for (const auto& w : report.workflows) {
    wfs.push_back({{"id", w.id},
                   {"template", w.template_name},
                   {"tasks", w.tasks},
                   {"arrival_us", w.arrival.count()},
                   {"finish_us", w.finish.count()},
                   {"makespan_us", w.makespan.count()},
                   {"budget_picos", w.budget.picos()},
                   {"cost_picos", w.cost.picos()},
                   {"budget_met", w.budget_met}});
  }
  doc["workflows"] = std::move(wfs);
  json counts = json::object();
  for (const auto& [type, n] : report.fleet.vm_count_by_type) counts[type] = n;
  doc["fleet"] = {{"vm_count", report.fleet.vm_count},
                  {"vm_count_by_type", std::move(counts)},
                  {"busy_seconds", report.fleet.busy_seconds},
                  {"billed_seconds", report.fleet.billed_seconds},
                  {"utilization_pct", report.fleet.utilization_pct},
                  {"total_cost_picos", report.fleet.total_cost.picos()}};
  return doc;
}

MetricsReport report_from_json(const json& doc) {
  try {
    MetricsReport r;
    r.scheduler = doc.at("scheduler").get<std::string>();
    r.workload_hash = std::stoull(doc.at("workload_hash").get<std::string>(), nullptr, 16);
    r.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& w : doc.at("workflows")) {
      WorkflowMetrics m;
      m.id = w.at("id").get<std::string>();
      m.template_name = w.at("template").get<std::string>();
      m.tasks = w.at("tasks").get<std::size_t>();
      m.arrival = SimTime{w.at("arrival_us").get<std::int64_t>()};
      m.finish = SimTime{w.at("finish_us").get<std::int64_t>()};
      m.makespan = SimTime{w.at("makespan_us").get<std::int64_t>()};
      m.budget = Money::from_picos(w.at("budget_picos").get<std::int64_t>());
      m.cost = Money::from_picos(w.at("cost_picos").get<std::int64_t>());
      m.budget_met = w.at("budget_met").get<bool>();
      m.cost_per_budget = cost_per_budget(m.cost, m.budget);
      r.workflows.push_back(std::move(m));
    }
    const auto& f = doc.at("fleet");
    r.fleet.vm_count = f.at("vm_count").get<std::size_t>();
    for (const auto& [type, n] : f.at("vm_count_by_type").items()) r.fleet.vm_count_by_type[type] = n.get<std::size_t>();
    r.fleet.busy_seconds = f.at("busy_seconds").get<double>();
    r.fleet.billed_seconds = f.at("billed_seconds").get<std::int64_t>();
    r.fleet.utilization_pct = f.at("utilization_pct").get<double>();
    r.fleet.total_cost = Money::from_picos(f.at("total_cost_picos").get<std::int64_t>());
    return r;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  } catch (const std::logic_error& e) {
    throw SchemaError(std::string("malformed report: ") + e.what());
  }
}

std::string workflows_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "workflow,template,tasks,arrival_time,finish_time,makespan,budget,cost,budget_met,cost_per_budget\n";
  for (const auto& w : report.workflows) {
    out << w.id << ',' << w.template_name << ',' << w.tasks << ',' << seconds_str(w.arrival) << ','
        << seconds_str(w.finish) << ',' << seconds_str(w.makespan) << ',' << w.budget.to_string(9) << ','
        << w.cost.to_string(9) << ',' << (w.budget_met ? 1 : 0) << ',' << ratio_str(w.cost_per_budget) << '\n';
  }
  return out.str();
}

}  // namespace waas
