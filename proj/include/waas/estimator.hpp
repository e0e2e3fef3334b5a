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
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "waas/cloud.hpp"
#include "waas/units.hpp"
#include "waas/workflow.hpp"

namespace waas {

struct ExecutionRecord {
  std::string task_kind;
  std::string vm_type_name;
  SimTime actual_runtime{0};
  SimTime completion_time{0};
};

enum class EstimatorMode { oracle, history };

struct EstimatorConfig {
  EstimatorMode mode = EstimatorMode::oracle;
  std::size_t window = 10;
  double cold_start_margin = 1.5;
  std::vector<ExecutionRecord> bootstrap;  // loaded before the first estimate

  /// Throws ConfigError under `estimator.`.
  void validate() const;
};

/// Source of runtime estimates used by the schedulers.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual SimTime estimate(const TaskRecord& task, const VmType& type) const = 0;
};

/// Oracle mode returns the nominal runtime. History mode averages the last
/// `window` records of the task kind on the same type; with none on that type
/// it averages the kind's last `window` records on any type, each rescaled by
/// speed_factor ratio; with no records at all it returns the nominal runtime
/// times `cold_start_margin`.
class RuntimeEstimator final : public Estimator {
 public:
  RuntimeEstimator(EstimatorConfig config, std::vector<VmType> catalog);

  /// Reference runtime of a kind, used by estimate(kind, type).
  void register_kind(const std::string& kind, double reference_runtime);
  void register_workload(const WorkloadSpec& workload);

  SimTime estimate(const TaskRecord& task, const VmType& type) const override;
  /// Throws UnknownKindError if the kind is neither registered nor recorded.
  SimTime estimate(std::string_view kind, const VmType& type) const;

  /// Throws ArgumentError on a non-positive runtime or unknown type name.
  void record(ExecutionRecord rec);
  std::size_t record_count() const;

  const EstimatorConfig& config() const { return config_; }

 private:
  SimTime estimate_impl(std::string_view kind, double reference_runtime, double transfer_time,
                        const VmType& type) const;
  double speed_of(const std::string& type_name) const;

  EstimatorConfig config_;
  std::vector<VmType> catalog_;
  std::map<std::string, double, std::less<>> kinds_;
  std::map<std::string, std::vector<ExecutionRecord>, std::less<>> history_;
};

/// CSV with header `kind,vm_type,actual_runtime` (seconds).
/// Throws SchemaError on malformed rows.
std::vector<ExecutionRecord> read_history_csv(std::istream& in);

}  // namespace waas
