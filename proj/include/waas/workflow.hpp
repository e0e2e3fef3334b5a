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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "waas/units.hpp"

namespace waas {

using TaskIndex = std::size_t;

enum class TaskState { pending, ready, queued, scheduled, running, completed };

std::string_view to_string(TaskState s);

/// One workflow node. Parent/child links are indices into the owning
/// WorkflowSpec's task list.
struct TaskRecord {
  std::string id;
  std::string kind;
  double reference_runtime = 0.0;  // seconds on a speed_factor 1.0 machine
  double transfer_time = 0.0;      // seconds, not scaled by machine speed
  std::vector<TaskIndex> parents;
  std::vector<TaskIndex> children;
  int level = 0;
  TaskState state = TaskState::pending;

  bool is_entry() const { return parents.empty(); }
  bool is_exit() const { return children.empty(); }

  /// Moves strictly forward along pending -> ... -> completed.
  /// Throws IllegalStateError otherwise.
  void advance(TaskState next);

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

/// Task as written in a document: parents by id, children not yet derived.
struct TaskDraft {
  std::string id;
  std::string kind;
  double runtime = 0.0;
  std::vector<std::string> parents;
  double transfer_time = 0.0;
};

class WorkflowSpec {
 public:
  WorkflowSpec() = default;

  /// Validates the drafts (unique ids, positive runtimes, known parents,
  /// acyclic) and derives children and levels.
  /// Throws SchemaError, DanglingRefError or CycleError.
  static WorkflowSpec build(std::string id, Money budget, SimTime arrival_time, std::vector<TaskDraft> drafts,
                            std::string template_name = {});

  const std::string& id() const { return id_; }
  const std::string& template_name() const { return template_name_; }
  Money budget() const { return budget_; }
  SimTime arrival_time() const { return arrival_time_; }

  std::span<const TaskRecord> tasks() const { return tasks_; }
  const TaskRecord& task(TaskIndex i) const { return tasks_.at(i); }
  TaskRecord& mutable_task(TaskIndex i) { return tasks_.at(i); }
  std::size_t size() const { return tasks_.size(); }
  std::optional<TaskIndex> find(std::string_view task_id) const;

  std::vector<TaskIndex> entry_tasks() const;
  std::vector<TaskIndex> exit_tasks() const;
  std::size_t edge_count() const;

  /// Copies with a different identity/budget/arrival; the graph is shared.
  WorkflowSpec instantiate(std::string id, Money budget, SimTime arrival_time) const;

  friend bool operator==(const WorkflowSpec&, const WorkflowSpec&) = default;

 private:
  std::string id_;
  std::string template_name_;
  Money budget_;
  SimTime arrival_time_{0};
  std::vector<TaskRecord> tasks_;
};

struct WorkloadSpec {
  std::vector<WorkflowSpec> workflows;  // non-decreasing arrival_time
  double arrival_rate = 0.0;            // workflows per minute
  std::uint64_t seed = 0;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

/// Longest path (edge count) from any entry task.
/// Throws CycleError if the drafts are cyclic, DanglingRefError on unknown parents.
std::map<std::string, int> compute_levels(std::span<const TaskDraft> drafts);
std::map<std::string, int> compute_levels(const WorkflowSpec& spec);

// Canonical JSON.
WorkflowSpec parse_workflow(std::string_view document);
WorkflowSpec workflow_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const WorkflowSpec& spec, bool with_arrival = false);
std::string serialize_workflow(const WorkflowSpec& spec);

WorkloadSpec parse_workload(std::string_view document);
nlohmann::json to_json(const WorkloadSpec& workload);
std::string serialize_workload(const WorkloadSpec& workload);
/// Stable 64-bit digest of the canonical workload serialization.
std::uint64_t workload_hash(const WorkloadSpec& workload);

// Templates. Runtime profiles map task kind -> reference runtime (seconds).
using RuntimeProfile = std::map<std::string, double>;

/// Synthetic runtimes; the domain gives task shapes but no timings.
RuntimeProfile default_genome_profile();
RuntimeProfile default_vina_profile();

/// `fan_out` parallel `individuals` tasks and one `sifting` task at level 0,
/// `individuals_merge` joining the individuals, and two exit tasks
/// (`mutations_overlap`, `frequency`) depending on merge and sifting.
WorkflowSpec genome_template(std::string chromosome, int fan_out, const RuntimeProfile& profile = default_genome_profile());

/// Bag of `ligand_count` independent docking tasks of kind `vina`.
WorkflowSpec vina_template(std::string name, int ligand_count, const RuntimeProfile& profile = default_vina_profile());

/// chr21, chr22, vina01, vina02 with default shapes (fan_out 10, 7 ligands).
WorkflowSpec preset_template(std::string_view name);
std::vector<std::string> preset_template_names();
/// The four budget levels (beta1..beta4) for a preset template.
std::vector<Money> preset_budgets(std::string_view name);

struct CatalogEntry {
  WorkflowSpec workflow;
  Money budget;
};

/// `count` workflows drawn uniformly from `catalog`, Poisson arrivals at
/// `rate_wf_per_min`. Per workflow the template draw comes from the
/// "template" substream and the gap from the "arrival" substream.
/// Throws ArgumentError on an empty catalog, count < 1 or rate <= 0.
WorkloadSpec generate_workload(std::span<const CatalogEntry> catalog, int count, double rate_wf_per_min,
                               std::uint64_t seed);

}  // namespace waas
