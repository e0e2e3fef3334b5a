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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "waas/budget.hpp"
#include "waas/cloud.hpp"
#include "waas/estimator.hpp"
#include "waas/metrics.hpp"
#include "waas/scheduler.hpp"
#include "waas/simulation.hpp"
#include "waas/workflow.hpp"

namespace waas {

struct TemplateConfig {
  std::string name;
  WorkflowSpec workflow;
  std::vector<Money> budgets;  // strictly increasing
};

struct ExperimentConfig {
  CloudConfig cloud = default_cloud_config();
  /// Catalog type used by fcfs / ebpsm-homogeneous runs when the catalog has several.
  std::optional<std::string> homogeneous_type;
  EstimatorConfig estimator;
  BudgetOptions budget;
  std::vector<TemplateConfig> templates;
  std::vector<int> budget_levels;  // 1-based; empty selects all levels
  int workload_size = 20;
  std::vector<double> arrival_rates = {0.5, 2.0, 6.0, 12.0};
  std::vector<SchedulerKind> schedulers = {SchedulerKind::ebpsm};
  int repetitions = 1;
  std::uint64_t seed_base = 1;
  std::string output_dir = "results";
  bool write_traces = true;

  /// Throws ConfigError with the field path.
  void validate() const;
  std::vector<CatalogEntry> catalog() const;
  /// Cloud settings for a scheduler (homogeneous ones get the single type).
  CloudConfig cloud_for(SchedulerKind kind) const;
};

/// Four preset templates with their four budget levels, default cloud,
/// t2.micro for the homogeneous schedulers.
ExperimentConfig default_experiment_config();

/// Missing fields keep their defaults; a custom catalog clears the default
/// homogeneous_type. Relative `workflow_file` and
/// `history_file` paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Normalized form used for the manifest and the config hash.
nlohmann::json to_json(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

struct RunSpec {
  std::string id;
  SchedulerKind scheduler = SchedulerKind::ebpsm;
  std::size_t rate_index = 0;
  double rate = 0.0;
  int repetition = 0;
  std::uint64_t workload_seed = 0;
  std::uint64_t sim_seed = 0;
};

struct RunOutcome {
  RunSpec spec;
  WorkloadSpec workload;
  SimulationResult result;
  bool audit_ok = true;
};

/// One run per (rate, scheduler, repetition), in that nesting order. The
/// workload depends on (rate, repetition) only, so schedulers see identical
/// workloads.
std::vector<RunSpec> plan_runs(const ExperimentConfig& config);

/// Runs everything on up to `jobs` threads; results come back in plan order.
/// A StallError is rethrown prefixed with the run id.
std::vector<RunOutcome> execute_runs(const ExperimentConfig& config, std::size_t jobs = 1);

struct BudgetMetRow {
  std::string scheduler;
  double rate = 0.0;
  std::size_t workflows = 0;
  std::size_t met = 0;
  double budget_met_pct = 0.0;
  std::size_t violations = 0;
  std::optional<double> mean_violation_ratio;  // mean cost/budget over violations only
};

/// Per rate: share of workflows within budget and the mean cost/budget of the rest.
std::vector<BudgetMetRow> summarize_budget_met(const std::map<double, std::vector<const MetricsReport*>>& by_rate,
                                               const std::string& scheduler = {});
std::string budget_met_csv(const std::vector<BudgetMetRow>& rows);

std::string summary_csv(const std::vector<RunOutcome>& runs, const CloudConfig& cloud);

struct ComparisonRow {
  std::string workflow;
  double makespan_a = 0.0;
  double makespan_b = 0.0;
  double makespan_ratio = 1.0;  // a / b
  Money cost_a;
  Money cost_b;
  double cost_ratio = 1.0;      // a / b
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double mean_makespan_ratio = 1.0;
  double speedup = 1.0;           // mean makespan of b / mean makespan of a
  double workflow_cost_ratio = 1.0;
  double fleet_cost_ratio = 1.0;  // includes idle and deprovisioning time
  std::size_t vm_count_a = 0;
  std::size_t vm_count_b = 0;
  bool a_faster = false;
  bool a_cheaper = false;
};

/// Throws ManifestMismatchError unless both reports cover the same workload.
Comparison compare(const MetricsReport& a, const MetricsReport& b);
std::string comparison_csv(const Comparison& c);

struct ExperimentOutputs {
  std::filesystem::path summary;
  std::filesystem::path budget_met;
  std::filesystem::path manifest;
  std::size_t runs = 0;
};

/// Executes the plan and writes per-run files, summary.csv, budget_met.csv
/// and manifest.json under `out_dir` (config.output_dir when empty).
ExperimentOutputs run_experiment(const ExperimentConfig& config, std::size_t jobs = 1,
                                 std::filesystem::path out_dir = {});

}  // namespace waas
