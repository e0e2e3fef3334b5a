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

#include "waas/workflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "waas/errors.hpp"
#include "waas/rng.hpp"

namespace waas {

using nlohmann::json;

std::string_view to_string(TaskState s) {
  switch (s) {
    case TaskState::pending: return "pending";
    case TaskState::ready: return "ready";
    case TaskState::queued: return "queued";
    case TaskState::scheduled: return "scheduled";
    case TaskState::running: return "running";
    case TaskState::completed: return "completed";
  }
  return "?";
}

void TaskRecord::advance(TaskState next) {
  if (static_cast<int>(next) <= static_cast<int>(state)) {
    throw IllegalStateError("task " + id + ": cannot move from " + std::string(to_string(state)) + " to " +
                            std::string(to_string(next)));
  }
  state = next;
}

namespace {

struct Graph {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> parents;
};

Graph index_drafts(std::span<const TaskDraft> drafts) {
  Graph g;
  g.index.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    if (!g.index.emplace(drafts[i].id, i).second) throw SchemaError("duplicate task id '" + drafts[i].id + "'");
  }
  g.parents.resize(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    std::unordered_set<std::size_t> seen;
    for (const auto& p : drafts[i].parents) {
      auto it = g.index.find(p);
      if (it == g.index.end()) {
        throw DanglingRefError("task '" + drafts[i].id + "' lists unknown parent '" + p + "'");
      }
      if (seen.insert(it->second).second) g.parents[i].push_back(it->second);
    }
  }
  return g;
}

// Kahn's algorithm; levels follow the longest-path recurrence.
std::vector<int> level_vector(const Graph& g, std::span<const TaskDraft> drafts) {
  const std::size_t n = g.parents.size();
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = g.parents[i].size();
    for (auto p : g.parents[i]) children[p].push_back(i);
  }
  std::vector<int> level(n, 0);
  std::queue<std::size_t> frontier;
  for (std::size_t i = 0; i < n; ++i)
    if (pending[i] == 0) frontier.push(i);
  std::size_t visited = 0;
  while (!frontier.empty()) {
    auto u = frontier.front();
    frontier.pop();
    ++visited;
    for (auto c : children[u]) {
      level[c] = std::max(level[c], level[u] + 1);
      if (--pending[c] == 0) frontier.push(c);
    }
  }
  if (visited != n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (pending[i] != 0) throw CycleError("task graph has a cycle through '" + drafts[i].id + "'");
    }
  }
  return level;
}

}  // namespace

std::map<std::string, int> compute_levels(std::span<const TaskDraft> drafts) {
  auto g = index_drafts(drafts);
  auto levels = level_vector(g, drafts);
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < drafts.size(); ++i) out.emplace(drafts[i].id, levels[i]);
  return out;
}

std::map<std::string, int> compute_levels(const WorkflowSpec& spec) {
  std::vector<TaskDraft> drafts;
  drafts.reserve(spec.size());
  for (const auto& t : spec.tasks()) {
    TaskDraft d{t.id, t.kind, t.reference_runtime, {}, t.transfer_time};
    for (auto p : t.parents) d.parents.push_back(spec.task(p).id);
    drafts.push_back(std::move(d));
  }
  return compute_levels(drafts);
}

WorkflowSpec WorkflowSpec::build(std::string id, Money budget, SimTime arrival_time, std::vector<TaskDraft> drafts,
                                 std::string template_name) {
  if (id.empty()) throw SchemaError("workflow id must be non-empty");
  if (budget < kZeroMoney) throw SchemaError("workflow '" + id + "': budget must be >= 0");
  if (arrival_time < SimTime{0}) throw SchemaError("workflow '" + id + "': arrival_time must be >= 0");
  if (drafts.empty()) throw SchemaError("workflow '" + id + "' has no tasks");
  for (const auto& d : drafts) {
    if (d.id.empty()) throw SchemaError("workflow '" + id + "': task id must be non-empty");
    if (!(d.runtime > 0.0) || !std::isfinite(d.runtime)) {
      throw SchemaError("task '" + d.id + "': runtime must be a finite number > 0");
    }
    if (!(d.transfer_time >= 0.0) || !std::isfinite(d.transfer_time)) {
      throw SchemaError("task '" + d.id + "': transfer must be a finite number >= 0");
    }
  }
  auto g = index_drafts(drafts);
  auto levels = level_vector(g, drafts);

  WorkflowSpec spec;
  spec.id_ = std::move(id);
  spec.template_name_ = std::move(template_name);
  spec.budget_ = budget;
  spec.arrival_time_ = arrival_time;
  spec.tasks_.resize(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    auto& t = spec.tasks_[i];
    t.id = std::move(drafts[i].id);
    t.kind = std::move(drafts[i].kind);
    t.reference_runtime = drafts[i].runtime;
    t.transfer_time = drafts[i].transfer_time;
    t.parents = g.parents[i];
    t.level = levels[i];
  }
  for (std::size_t i = 0; i < spec.tasks_.size(); ++i) {
    for (auto p : spec.tasks_[i].parents) spec.tasks_[p].children.push_back(i);
  }
  return spec;
}

std::optional<TaskIndex> WorkflowSpec::find(std::string_view task_id) const {
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].id == task_id) return i;
  return std::nullopt;
}

std::vector<TaskIndex> WorkflowSpec::entry_tasks() const {
  std::vector<TaskIndex> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].is_entry()) out.push_back(i);
  return out;
}

std::vector<TaskIndex> WorkflowSpec::exit_tasks() const {
  std::vector<TaskIndex> out;
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (tasks_[i].is_exit()) out.push_back(i);
  return out;
}

std::size_t WorkflowSpec::edge_count() const {
  std::size_t n = 0;
  for (const auto& t : tasks_) n += t.parents.size();
  return n;
}

WorkflowSpec WorkflowSpec::instantiate(std::string id, Money budget, SimTime arrival_time) const {
  if (budget < kZeroMoney) throw ArgumentError("budget must be >= 0");
  if (arrival_time < SimTime{0}) throw ArgumentError("arrival_time must be >= 0");
  WorkflowSpec copy = *this;
  if (copy.template_name_.empty()) copy.template_name_ = id_;
  copy.id_ = std::move(id);
  copy.budget_ = budget;
  copy.arrival_time_ = arrival_time;
  for (auto& t : copy.tasks_) t.state = TaskState::pending;
  return copy;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double optional_number(const json& obj, const char* key, double fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw SchemaError(where + ": field '" + key + "' must be a number");
  return it->get<double>();
}

}  // namespace

WorkflowSpec workflow_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("workflow document must be a JSON object");
  const std::string id = require_string(doc, "id", "workflow");
  const std::string where = "workflow '" + id + "'";
  const double budget = require_number(doc, "budget", where);
  const double arrival = optional_number(doc, "arrival_time", 0.0, where);
  if (budget < 0) throw SchemaError(where + ": budget must be >= 0");
  if (arrival < 0) throw SchemaError(where + ": arrival_time must be >= 0");
  std::string template_name;
  if (auto it = doc.find("template"); it != doc.end() && it->is_string()) template_name = it->get<std::string>();

  const auto& tasks = require(doc, "tasks", where);
  if (!tasks.is_array()) throw SchemaError(where + ": field 'tasks' must be an array");
  std::vector<TaskDraft> drafts;
  drafts.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    const std::string twhere = where + " tasks[" + std::to_string(i) + "]";
    if (!t.is_object()) throw SchemaError(twhere + ": task must be an object");
    TaskDraft d;
    d.id = require_string(t, "id", twhere);
    d.kind = require_string(t, "kind", twhere);
    d.runtime = require_number(t, "runtime", twhere);
    d.transfer_time = optional_number(t, "transfer", 0.0, twhere);
    const auto& parents = require(t, "parents", twhere);
    if (!parents.is_array()) throw SchemaError(twhere + ": field 'parents' must be an array");
    for (const auto& p : parents) {
      if (!p.is_string()) throw SchemaError(twhere + ": parent ids must be strings");
      d.parents.push_back(p.get<std::string>());
    }
    drafts.push_back(std::move(d));
  }
  return WorkflowSpec::build(id, Money::from_dollars(budget), from_seconds(arrival), std::move(drafts),
                             std::move(template_name));
}

WorkflowSpec parse_workflow(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return workflow_from_json(doc);
}

json to_json(const WorkflowSpec& spec, bool with_arrival) {
  json doc = json::object();
  doc["id"] = spec.id();
  if (!spec.template_name().empty()) doc["template"] = spec.template_name();
  doc["budget"] = spec.budget().dollars();
  if (with_arrival) doc["arrival_time"] = to_seconds(spec.arrival_time());
  json tasks = json::array();
  for (const auto& t : spec.tasks()) {
    json jt = json::object();
    jt["id"] = t.id;
    jt["kind"] = t.kind;
    jt["runtime"] = t.reference_runtime;
    if (t.transfer_time > 0) jt["transfer"] = t.transfer_time;
    json parents = json::array();
    for (auto p : t.parents) parents.push_back(spec.task(p).id);
    jt["parents"] = std::move(parents);
    tasks.push_back(std::move(jt));
  }
  doc["tasks"] = std::move(tasks);
  return doc;
}

std::string serialize_workflow(const WorkflowSpec& spec) { return to_json(spec, spec.arrival_time() > SimTime{0}).dump(2); }

WorkloadSpec parse_workload(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("workload document must be a JSON object");
  WorkloadSpec w;
  w.arrival_rate = optional_number(doc, "arrival_rate", 0.0, "workload");
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw SchemaError("workload: field 'seed' must be a non-negative integer");
    w.seed = it->get<std::uint64_t>();
  }
  const auto& wfs = require(doc, "workflows", "workload");
  if (!wfs.is_array()) throw SchemaError("workload: field 'workflows' must be an array");
  for (const auto& wf : wfs) {
    if (wf.is_object() && !wf.contains("arrival_time")) {
      throw SchemaError("workload: workflow entries need 'arrival_time'");
    }
    w.workflows.push_back(workflow_from_json(wf));
  }
  for (std::size_t i = 1; i < w.workflows.size(); ++i) {
    if (w.workflows[i].arrival_time() < w.workflows[i - 1].arrival_time()) {
      throw SchemaError("workload: arrival_time must be non-decreasing (workflow '" + w.workflows[i].id() + "')");
    }
  }
  return w;
}

json to_json(const WorkloadSpec& workload) {
  json doc = json::object();
  doc["arrival_rate"] = workload.arrival_rate;
  doc["seed"] = workload.seed;
  json wfs = json::array();
  for (const auto& wf : workload.workflows) wfs.push_back(to_json(wf, true));
  doc["workflows"] = std::move(wfs);
  return doc;
}

std::string serialize_workload(const WorkloadSpec& workload) { return to_json(workload).dump(2); }

std::uint64_t workload_hash(const WorkloadSpec& workload) { return fnv1a64(to_json(workload).dump()); }

// ---------------------------------------------------------------------------
// Templates

RuntimeProfile default_genome_profile() {
  return {{"individuals", 800.0},
          {"individuals_merge", 600.0},
          {"sifting", 40.0},
          {"mutations_overlap", 480.0},
          {"frequency", 400.0}};
}

RuntimeProfile default_vina_profile() { return {{"vina", 1200.0}}; }

namespace {

double profile_runtime(const RuntimeProfile& profile, const std::string& kind) {
  auto it = profile.find(kind);
  if (it == profile.end()) throw ArgumentError("runtime profile has no entry for kind '" + kind + "'");
  return it->second;
}

RuntimeProfile scaled(RuntimeProfile profile, double factor) {
  for (auto& [kind, runtime] : profile) runtime *= factor;
  return profile;
}

}  // namespace

WorkflowSpec genome_template(std::string chromosome, int fan_out, const RuntimeProfile& profile) {
  if (fan_out < 1) throw ArgumentError("genome_template: fan_out must be >= 1");
  std::vector<TaskDraft> drafts;
  std::vector<std::string> individuals;
  const int width = fan_out >= 100 ? 3 : 2;
  for (int i = 1; i <= fan_out; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "individuals_%0*d", width, i);
    individuals.emplace_back(buf);
    drafts.push_back({buf, "individuals", profile_runtime(profile, "individuals"), {}});
  }
  drafts.push_back({"sifting", "sifting", profile_runtime(profile, "sifting"), {}});
  drafts.push_back({"individuals_merge", "individuals_merge", profile_runtime(profile, "individuals_merge"), individuals});
  drafts.push_back(
      {"mutations_overlap", "mutations_overlap", profile_runtime(profile, "mutations_overlap"), {"individuals_merge", "sifting"}});
  drafts.push_back({"frequency", "frequency", profile_runtime(profile, "frequency"), {"individuals_merge", "sifting"}});
  auto name = chromosome;
  return WorkflowSpec::build(std::move(chromosome), kZeroMoney, SimTime{0}, std::move(drafts), std::move(name));
}

WorkflowSpec vina_template(std::string name, int ligand_count, const RuntimeProfile& profile) {
  if (ligand_count < 1) throw ArgumentError("vina_template: ligand_count must be >= 1");
  std::vector<TaskDraft> drafts;
  for (int i = 1; i <= ligand_count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "vina_%02d", i);
    drafts.push_back({buf, "vina", profile_runtime(profile, "vina"), {}});
  }
  auto tname = name;
  return WorkflowSpec::build(std::move(name), kZeroMoney, SimTime{0}, std::move(drafts), std::move(tname));
}

std::vector<std::string> preset_template_names() { return {"chr21", "chr22", "vina01", "vina02"}; }

WorkflowSpec preset_template(std::string_view name) {
  // chr21 is the slightly smaller chromosome; vina02 docks smaller ligand boxes.
  if (name == "chr21") return genome_template("chr21", 10, scaled(default_genome_profile(), 0.9));
  if (name == "chr22") return genome_template("chr22", 10);
  if (name == "vina01") return vina_template("vina01", 7);
  if (name == "vina02") return vina_template("vina02", 7, scaled(default_vina_profile(), 0.25));
  throw ArgumentError("unknown template '" + std::string(name) + "'");
}

std::vector<Money> preset_budgets(std::string_view name) {
  auto d = [](double v) { return Money::from_dollars(v); };
  if (name == "chr21" || name == "chr22") return {d(0.1), d(0.25), d(0.45), d(0.65)};
  if (name == "vina01") return {d(0.05), d(0.15), d(0.25), d(0.35)};
  if (name == "vina02") return {d(0.01), d(0.04), d(0.06), d(0.08)};
  throw ArgumentError("unknown template '" + std::string(name) + "'");
}

WorkloadSpec generate_workload(std::span<const CatalogEntry> catalog, int count, double rate_wf_per_min,
                               std::uint64_t seed) {
  if (catalog.empty()) throw ArgumentError("generate_workload: catalog is empty");
  if (count < 1) throw ArgumentError("generate_workload: count must be >= 1");
  if (!(rate_wf_per_min > 0.0) || !std::isfinite(rate_wf_per_min)) {
    throw ArgumentError("generate_workload: rate must be > 0");
  }
  auto template_rng = Rng::substream(seed, "template");
  auto arrival_rng = Rng::substream(seed, "arrival");
  const double mean_gap = 60.0 / rate_wf_per_min;

  WorkloadSpec w;
  w.arrival_rate = rate_wf_per_min;
  w.seed = seed;
  w.workflows.reserve(static_cast<std::size_t>(count));
  SimTime clock{0};
  for (int i = 0; i < count; ++i) {
    const auto& entry = catalog[template_rng.index(catalog.size())];
    clock += from_seconds(arrival_rng.exponential(mean_gap));
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%03d-", i);
    const auto& tname = entry.workflow.template_name().empty() ? entry.workflow.id() : entry.workflow.template_name();
    w.workflows.push_back(entry.workflow.instantiate(buf + tname, entry.budget, clock));
  }
  return w;
}

}  // namespace waas
