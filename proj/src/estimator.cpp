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

#include "waas/estimator.hpp"

#include <cmath>
#include <sstream>

#include "waas/errors.hpp"

namespace waas {

void EstimatorConfig::validate() const {
  if (window < 1) throw ConfigError("estimator.window", "must be >= 1");
  if (!(cold_start_margin >= 1.0) || !std::isfinite(cold_start_margin)) {
    throw ConfigError("estimator.cold_start_margin", "must be >= 1");
  }
}

RuntimeEstimator::RuntimeEstimator(EstimatorConfig config, std::vector<VmType> catalog)
    : config_(std::move(config)), catalog_(std::move(catalog)) {
  config_.validate();
  auto bootstrap = std::move(config_.bootstrap);
  config_.bootstrap.clear();
  for (auto& rec : bootstrap) record(std::move(rec));
}

void RuntimeEstimator::register_kind(const std::string& kind, double reference_runtime) {
  if (!(reference_runtime > 0.0)) throw ArgumentError("register_kind: runtime must be > 0");
  kinds_.insert_or_assign(kind, reference_runtime);
}

void RuntimeEstimator::register_workload(const WorkloadSpec& workload) {
  for (const auto& wf : workload.workflows)
    for (const auto& t : wf.tasks()) kinds_.try_emplace(t.kind, t.reference_runtime);
}

double RuntimeEstimator::speed_of(const std::string& type_name) const {
  for (const auto& t : catalog_)
    if (t.name == type_name) return t.speed_factor;
  throw ArgumentError("unknown vm type '" + type_name + "'");
}

void RuntimeEstimator::record(ExecutionRecord rec) {
  if (rec.actual_runtime <= SimTime{0}) throw ArgumentError("record: actual_runtime must be > 0");
  speed_of(rec.vm_type_name);
  auto it = history_.find(rec.task_kind);
  if (it == history_.end()) it = history_.emplace(rec.task_kind, std::vector<ExecutionRecord>{}).first;
  it->second.push_back(std::move(rec));
}

std::size_t RuntimeEstimator::record_count() const {
  std::size_t n = 0;
  for (const auto& [kind, recs] : history_) n += recs.size();
  return n;
}

SimTime RuntimeEstimator::estimate(const TaskRecord& task, const VmType& type) const {
  return estimate_impl(task.kind, task.reference_runtime, task.transfer_time, type);
}

SimTime RuntimeEstimator::estimate(std::string_view kind, const VmType& type) const {
  auto k = kinds_.find(kind);
  if (k == kinds_.end()) {
    if (config_.mode == EstimatorMode::history && history_.contains(kind)) return estimate_impl(kind, 0.0, 0.0, type);
    throw UnknownKindError("no reference runtime or history for kind '" + std::string(kind) + "'");
  }
  return estimate_impl(kind, k->second, 0.0, type);
}

SimTime RuntimeEstimator::estimate_impl(std::string_view kind, double reference_runtime, double transfer_time,
                                        const VmType& type) const {
  if (config_.mode == EstimatorMode::oracle) return nominal_runtime(type, reference_runtime, transfer_time);

  auto it = history_.find(kind);
  if (it == history_.end() || it->second.empty()) {
    const double seconds = (reference_runtime / type.speed_factor + transfer_time) * config_.cold_start_margin;
    return std::max(from_seconds(seconds), SimTime{1});
  }
  const auto& recs = it->second;

  // Same-type records first, newest backwards.
  long double sum = 0;
  std::size_t n = 0;
  for (auto r = recs.rbegin(); r != recs.rend() && n < config_.window; ++r) {
    if (r->vm_type_name != type.name) continue;
    sum += static_cast<long double>(r->actual_runtime.count());
    ++n;
  }
  if (n == 0) {
    for (auto r = recs.rbegin(); r != recs.rend() && n < config_.window; ++r) {
      const double ratio = speed_of(r->vm_type_name) / type.speed_factor;
      sum += static_cast<long double>(r->actual_runtime.count()) * ratio;
      ++n;
    }
  }
  const auto mean = static_cast<std::int64_t>(std::llround(static_cast<double>(sum / n)));
  return std::max(SimTime{mean}, SimTime{1});
}

std::vector<ExecutionRecord> read_history_csv(std::istream& in) {
  std::vector<ExecutionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("kind,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string kind, type, runtime;
    if (!std::getline(ss, kind, ',') || !std::getline(ss, type, ',') || !std::getline(ss, runtime)) {
      throw SchemaError("history line " + std::to_string(line_no) + ": expected kind,vm_type,actual_runtime");
    }
    double seconds = 0;
    try {
      std::size_t used = 0;
      seconds = std::stod(runtime, &used);
      if (used != runtime.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw SchemaError("history line " + std::to_string(line_no) + ": bad runtime '" + runtime + "'");
    }
    if (!(seconds > 0)) throw SchemaError("history line " + std::to_string(line_no) + ": runtime must be > 0");
    out.push_back({kind, type, from_seconds(seconds), SimTime{0}});
  }
  return out;
}

}  // namespace waas
