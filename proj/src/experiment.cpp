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

#include "waas/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "waas/errors.hpp"
#include "waas/rng.hpp"
#include "waas/trace_audit.hpp"

namespace waas {

using nlohmann::json;

namespace {

std::string fmt_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string rate_label(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", rate);
  return buf;
}

// Field-path aware accessors over a JSON object.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const char* key) const { return obj_.contains(key); }
  const json& raw(const char* key) const { return obj_.at(key); }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(at(key), "must be a number");
    return v.get<double>();
  }
  std::int64_t integer(const char* key, std::int64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "must be an integer");
    return v.get<std::int64_t>();
  }
  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_number_unsigned()) throw ConfigError(at(key), "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "must be true or false");
    return v.get<bool>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "must be a string");
    return v.get<std::string>();
  }
  const json& array(const char* key) const {
    const auto& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(at(key), "must be an array");
    return v;
  }

 private:
  const json& obj_;
  std::string path_;
};

SimTime seconds_field(const Fields& f, const char* key, SimTime fallback) {
  if (!f.has(key)) return fallback;
  return from_seconds(f.number(key, 0.0));
}

CloudConfig parse_cloud(const json& doc) {
  CloudConfig c = default_cloud_config();
  Fields f(doc, "cloud");
  if (f.has("catalog")) {
    c.catalog.clear();
    const auto& arr = f.array("catalog");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Fields t(arr[i], "cloud.catalog[" + std::to_string(i) + "]");
      VmType vt;
      vt.name = t.string("name", "");
      vt.vcpus = static_cast<int>(t.integer("vcpus", 1));
      vt.memory_mb = static_cast<int>(t.integer("memory_mb", 1024));
      if (!t.has("price_per_second")) throw ConfigError(t.at("price_per_second"), "is required");
      vt.price_per_second = Money::from_dollars(t.number("price_per_second", 0.0));
      vt.speed_factor = t.number("speed_factor", 1.0);
      c.catalog.push_back(std::move(vt));
    }
  }
  c.provisioning_delay = seconds_field(f, "provisioning_delay", c.provisioning_delay);
  c.deprovisioning_delay = seconds_field(f, "deprovisioning_delay", c.deprovisioning_delay);
  c.idle_threshold = seconds_field(f, "idle_threshold", c.idle_threshold);
  c.scan_interval = seconds_field(f, "scan_interval", c.scan_interval);
  c.bill_provisioning = f.boolean("bill_provisioning", c.bill_provisioning);
  if (f.has("variability")) {
    Fields v(f.raw("variability"), "cloud.variability");
    const auto mode = v.string("mode", "none");
    if (mode == "none") {
      c.variability.mode = Variability::Mode::none;
    } else if (mode == "lognormal") {
      c.variability.mode = Variability::Mode::lognormal;
    } else {
      throw ConfigError("cloud.variability.mode", "must be 'none' or 'lognormal'");
    }
    c.variability.sigma = v.number("sigma", 0.0);
  }
  return c;
}

EstimatorConfig parse_estimator(const json& doc, const std::filesystem::path& base_dir) {
  EstimatorConfig e;
  Fields f(doc, "estimator");
  const auto mode = f.string("mode", "oracle");
  if (mode == "oracle") {
    e.mode = EstimatorMode::oracle;
  } else if (mode == "history") {
    e.mode = EstimatorMode::history;
  } else {
    throw ConfigError("estimator.mode", "must be 'oracle' or 'history'");
  }
  const auto window = f.integer("window", static_cast<std::int64_t>(e.window));
  if (window < 1) throw ConfigError("estimator.window", "must be >= 1");
  e.window = static_cast<std::size_t>(window);
  e.cold_start_margin = f.number("cold_start_margin", e.cold_start_margin);
  if (f.has("history_file")) {
    auto path = std::filesystem::path(f.string("history_file", ""));
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("estimator.history_file", "cannot open " + path.string());
    try {
      e.bootstrap = read_history_csv(in);
    } catch (const SchemaError& err) {
      throw ConfigError("estimator.history_file", err.what());
    }
  }
  return e;
}

RuntimeProfile parse_profile(const Fields& f, const char* key, RuntimeProfile profile) {
  if (!f.has(key)) return profile;
  const auto& obj = f.raw(key);
  if (!obj.is_object()) throw ConfigError(f.at(key), "must map task kind to runtime seconds");
  for (const auto& [kind, v] : obj.items()) {
    if (!v.is_number() || !(v.get<double>() > 0)) throw ConfigError(f.at(key) + "." + kind, "must be a number > 0");
    profile[kind] = v.get<double>();
  }
  return profile;
}

TemplateConfig parse_template(const json& doc, std::size_t index, const std::filesystem::path& base_dir) {
  const std::string path = "templates[" + std::to_string(index) + "]";
  Fields f(doc, path);
  TemplateConfig t;
  t.name = f.string("name", f.has("preset") ? f.string("preset", "") : "");
  if (t.name.empty()) throw ConfigError(f.at("name"), "is required");

  try {
    if (f.has("preset")) {
      const auto preset = f.string("preset", "");
      t.workflow = preset_template(preset);
      t.budgets = preset_budgets(preset);
    } else if (f.has("genome")) {
      Fields g(f.raw("genome"), f.at("genome"));
      const auto fan_out = g.integer("fan_out", 10);
      auto profile = parse_profile(g, "runtimes", default_genome_profile());
      const double scale = g.number("runtime_scale", 1.0);
      if (!(scale > 0)) throw ConfigError(g.at("runtime_scale"), "must be > 0");
      for (auto& [k, v] : profile) v *= scale;
      t.workflow = genome_template(t.name, static_cast<int>(fan_out), profile);
    } else if (f.has("vina")) {
      Fields v(f.raw("vina"), f.at("vina"));
      const auto ligands = v.integer("ligands", 7);
      auto profile = parse_profile(v, "runtimes", default_vina_profile());
      const double scale = v.number("runtime_scale", 1.0);
      if (!(scale > 0)) throw ConfigError(v.at("runtime_scale"), "must be > 0");
      for (auto& [k, r] : profile) r *= scale;
      t.workflow = vina_template(t.name, static_cast<int>(ligands), profile);
    } else if (f.has("workflow_file")) {
      auto file = std::filesystem::path(f.string("workflow_file", ""));
      if (file.is_relative()) file = base_dir / file;
      std::ifstream in(file);
      if (!in) throw ConfigError(f.at("workflow_file"), "cannot open " + file.string());
      std::stringstream ss;
      ss << in.rdbuf();
      try {
        t.workflow = parse_workflow(ss.str());
      } catch (const Error& e) {
        throw ConfigError(f.at("workflow_file"), e.what());
      }
    } else {
      throw ConfigError(path, "needs one of 'preset', 'genome', 'vina' or 'workflow_file'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  }
  t.workflow = t.workflow.instantiate(t.name, kZeroMoney, SimTime{0});

  if (f.has("budgets")) {
    t.budgets.clear();
    const auto& arr = f.array("budgets");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw ConfigError(f.at("budgets") + "[" + std::to_string(i) + "]", "must be a number");
      t.budgets.push_back(Money::from_dollars(arr[i].get<double>()));
    }
  }
  return t;
}

}  // namespace

void ExperimentConfig::validate() const {
  cloud.validate();
  estimator.validate();
  if (templates.empty()) throw ConfigError("templates", "must list at least one template");
  std::set<std::string> names;
  std::size_t levels = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const auto& t = templates[i];
    const std::string path = "templates[" + std::to_string(i) + "]";
    if (!names.insert(t.name).second) throw ConfigError(path + ".name", "duplicate template '" + t.name + "'");
    if (t.budgets.empty()) throw ConfigError(path + ".budgets", "must list at least one budget level");
    for (std::size_t k = 0; k < t.budgets.size(); ++k) {
      if (t.budgets[k] < kZeroMoney) throw ConfigError(path + ".budgets", "must be >= 0");
      if (k > 0 && !(t.budgets[k - 1] < t.budgets[k])) throw ConfigError(path + ".budgets", "must be strictly increasing");
    }
    levels = std::min(levels, t.budgets.size());
  }
  for (std::size_t i = 0; i < budget_levels.size(); ++i) {
    const auto lvl = budget_levels[i];
    if (lvl < 1 || static_cast<std::size_t>(lvl) > levels) {
      throw ConfigError("budget_levels[" + std::to_string(i) + "]",
                        "must be between 1 and " + std::to_string(levels));
    }
  }
  if (workload_size < 1) throw ConfigError("workload_size", "must be >= 1");
  if (arrival_rates.empty()) throw ConfigError("arrival_rates", "must list at least one rate");
  for (std::size_t i = 0; i < arrival_rates.size(); ++i) {
    if (!(arrival_rates[i] > 0) || !std::isfinite(arrival_rates[i])) {
      throw ConfigError("arrival_rates[" + std::to_string(i) + "]", "must be > 0");
    }
  }
  if (schedulers.empty()) throw ConfigError("schedulers", "must list at least one scheduler");
  if (repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
  for (auto kind : schedulers) (void)cloud_for(kind);
}

std::vector<CatalogEntry> ExperimentConfig::catalog() const {
  std::vector<CatalogEntry> out;
  for (const auto& t : templates) {
    if (budget_levels.empty()) {
      for (auto b : t.budgets) out.push_back({t.workflow, b});
    } else {
      for (auto lvl : budget_levels) out.push_back({t.workflow, t.budgets.at(static_cast<std::size_t>(lvl - 1))});
    }
  }
  return out;
}

CloudConfig ExperimentConfig::cloud_for(SchedulerKind kind) const {
  if (!requires_homogeneous(kind)) return cloud;
  if (homogeneous_type) {
    auto idx = cloud.find_type(*homogeneous_type);
    if (!idx) throw ConfigError("homogeneous_type", "'" + *homogeneous_type + "' is not in cloud.catalog");
    CloudConfig c = cloud;
    c.catalog = {cloud.catalog[*idx]};
    return c;
  }
  if (cloud.catalog.size() != 1) {
    throw ConfigError("homogeneous_type", std::string(to_string(kind)) +
                                              " needs a single VM type; set homogeneous_type or use a one-type catalog");
  }
  return cloud;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig c;
  c.homogeneous_type = "t2.micro";
  for (const auto& name : preset_template_names()) {
    c.templates.push_back({name, preset_template(name), preset_budgets(name)});
  }
  return c;
}

ExperimentConfig parse_experiment_config(const json& doc, const std::filesystem::path& base_dir) {
  ExperimentConfig c = default_experiment_config();
  Fields f(doc, "");
  if (f.has("cloud")) {
    c.cloud = parse_cloud(f.raw("cloud"));
    if (f.raw("cloud").contains("catalog")) c.homogeneous_type.reset();
  }
  if (f.has("homogeneous_type")) c.homogeneous_type = f.string("homogeneous_type", "");
  if (f.has("estimator")) c.estimator = parse_estimator(f.raw("estimator"), base_dir);
  if (f.has("scheduler_options")) {
    Fields s(f.raw("scheduler_options"), "scheduler_options");
    c.budget.reserve_for_remaining = s.boolean("reserve_for_remaining", c.budget.reserve_for_remaining);
    c.budget.strict_sub_budget = s.boolean("strict_sub_budget", c.budget.strict_sub_budget);
  }
  if (f.has("templates")) {
    c.templates.clear();
    const auto& arr = f.array("templates");
    for (std::size_t i = 0; i < arr.size(); ++i) c.templates.push_back(parse_template(arr[i], i, base_dir));
  }
  if (f.has("budget_levels")) {
    c.budget_levels.clear();
    const auto& arr = f.array("budget_levels");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer()) throw ConfigError("budget_levels[" + std::to_string(i) + "]", "must be an integer");
      c.budget_levels.push_back(arr[i].get<int>());
    }
  }
  c.workload_size = static_cast<int>(f.integer("workload_size", c.workload_size));
  if (f.has("arrival_rates")) {
    c.arrival_rates.clear();
    const auto& arr = f.array("arrival_rates");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw ConfigError("arrival_rates[" + std::to_string(i) + "]", "must be a number");
      c.arrival_rates.push_back(arr[i].get<double>());
    }
  }
  if (f.has("schedulers")) {
    c.schedulers.clear();
    const auto& arr = f.array("schedulers");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "schedulers[" + std::to_string(i) + "]";
      if (!arr[i].is_string()) throw ConfigError(path, "must be a string");
      try {
        c.schedulers.push_back(parse_scheduler_kind(arr[i].get<std::string>()));
      } catch (const ConfigError& e) {
        throw ConfigError(path, "unknown scheduler '" + arr[i].get<std::string>() + "'");
      }
    }
  }
  c.repetitions = static_cast<int>(f.integer("repetitions", c.repetitions));
  c.seed_base = f.unsigned_integer("seed_base", c.seed_base);
  c.output_dir = f.string("output_dir", c.output_dir);
  c.write_traces = f.boolean("write_traces", c.write_traces);
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
  }
  return parse_experiment_config(doc, path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json cloud = json::object();
  json catalog = json::array();
  for (const auto& t : c.cloud.catalog) {
    catalog.push_back({{"name", t.name},
                       {"vcpus", t.vcpus},
                       {"memory_mb", t.memory_mb},
                       {"price_per_second", t.price_per_second.to_string(12)},
                       {"speed_factor", t.speed_factor}});
  }
  cloud["catalog"] = std::move(catalog);
  cloud["provisioning_delay_us"] = c.cloud.provisioning_delay.count();
  cloud["deprovisioning_delay_us"] = c.cloud.deprovisioning_delay.count();
  cloud["idle_threshold_us"] = c.cloud.idle_threshold.count();
  cloud["scan_interval_us"] = c.cloud.scan_interval.count();
  cloud["bill_provisioning"] = c.cloud.bill_provisioning;
  cloud["variability"] = {{"mode", c.cloud.variability.mode == Variability::Mode::none ? "none" : "lognormal"},
                          {"sigma", c.cloud.variability.sigma}};

  json templates = json::array();
  for (const auto& t : c.templates) {
    json budgets = json::array();
    for (auto b : t.budgets) budgets.push_back(b.to_string(12));
    templates.push_back({{"name", t.name}, {"workflow", to_json(t.workflow)}, {"budgets", std::move(budgets)}});
  }
  json schedulers = json::array();
  for (auto s : c.schedulers) schedulers.push_back(std::string(to_string(s)));
  return {{"cloud", std::move(cloud)},
          {"homogeneous_type", c.homogeneous_type ? json(*c.homogeneous_type) : json(nullptr)},
          {"estimator",
           {{"mode", c.estimator.mode == EstimatorMode::oracle ? "oracle" : "history"},
            {"window", c.estimator.window},
            {"cold_start_margin", c.estimator.cold_start_margin},
            {"bootstrap_records", c.estimator.bootstrap.size()}}},
          {"scheduler_options",
           {{"reserve_for_remaining", c.budget.reserve_for_remaining},
            {"strict_sub_budget", c.budget.strict_sub_budget}}},
          {"templates", std::move(templates)},
          {"budget_levels", c.budget_levels},
          {"workload_size", c.workload_size},
          {"arrival_rates", c.arrival_rates},
          {"schedulers", std::move(schedulers)},
          {"repetitions", c.repetitions},
          {"seed_base", c.seed_base}};
}

std::uint64_t config_hash(const ExperimentConfig& config) { return fnv1a64(to_json(config).dump()); }

std::vector<RunSpec> plan_runs(const ExperimentConfig& config) {
  std::vector<RunSpec> out;
  for (std::size_t ri = 0; ri < config.arrival_rates.size(); ++ri) {
    for (auto kind : config.schedulers) {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        RunSpec r;
        r.scheduler = kind;
        r.rate_index = ri;
        r.rate = config.arrival_rates[ri];
        r.repetition = rep;
        const auto key = std::to_string(ri) + "/" + std::to_string(rep);
        r.workload_seed = stream_seed(config.seed_base, "workload/" + key);
        r.sim_seed = stream_seed(config.seed_base, "simulation/" + key);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s_rate%s_rep%02d", std::string(to_string(kind)).c_str(),
                      rate_label(r.rate).c_str(), rep);
        r.id = buf;
        out.push_back(std::move(r));
      }
    }
  }
  return out;
}

namespace {

RunOutcome execute_one(const ExperimentConfig& config, const std::vector<CatalogEntry>& catalog, const RunSpec& spec) {
  RunOutcome out;
  out.spec = spec;
  out.workload = generate_workload(catalog, config.workload_size, spec.rate, spec.workload_seed);
  SimulationOptions opts;
  opts.scheduler = spec.scheduler;
  opts.cloud = config.cloud_for(spec.scheduler);
  opts.estimator = config.estimator;
  opts.budget = config.budget;
  opts.seed = spec.sim_seed;
  try {
    out.result = run_simulation(out.workload, opts);
  } catch (const StallError& e) {
    throw StallError("run " + spec.id + ": " + e.what());
  }
  out.audit_ok = audit_trace(out.result.trace, out.workload, opts.cloud).ok();
  return out;
}

}  // namespace

std::vector<RunOutcome> execute_runs(const ExperimentConfig& config, std::size_t jobs) {
  config.validate();
  const auto plan = plan_runs(config);
  const auto catalog = config.catalog();
  std::vector<RunOutcome> results(plan.size());
  std::vector<std::exception_ptr> errors(plan.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plan.size(); i = next++) {
      try {
        results[i] = execute_one(config, catalog, plan[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(plan.size(), 1));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<BudgetMetRow> summarize_budget_met(const std::map<double, std::vector<const MetricsReport*>>& by_rate,
                                               const std::string& scheduler) {
  std::vector<BudgetMetRow> rows;
  for (const auto& [rate, reports] : by_rate) {
    BudgetMetRow row;
    row.scheduler = scheduler;
    row.rate = rate;
    double ratio_sum = 0;
    for (const auto* rep : reports) {
      for (const auto& w : rep->workflows) {
        ++row.workflows;
        if (w.budget_met) {
          ++row.met;
        } else {
          ++row.violations;
          ratio_sum += w.cost_per_budget;
        }
      }
    }
    row.budget_met_pct = row.workflows ? 100.0 * static_cast<double>(row.met) / static_cast<double>(row.workflows) : 0.0;
    if (row.violations > 0) row.mean_violation_ratio = ratio_sum / static_cast<double>(row.violations);
    rows.push_back(row);
  }
  return rows;
}

std::string budget_met_csv(const std::vector<BudgetMetRow>& rows) {
  std::ostringstream out;
  out << "scheduler,rate,workflows,met,budget_met_pct,violations,mean_violation_ratio\n";
  for (const auto& r : rows) {
    out << r.scheduler << ',' << rate_label(r.rate) << ',' << r.workflows << ',' << r.met << ','
        << fmt_double(r.budget_met_pct, 4) << ',' << r.violations << ','
        << (r.mean_violation_ratio ? fmt_double(*r.mean_violation_ratio, 6) : std::string{}) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<RunOutcome>& runs, const CloudConfig& cloud) {
  std::ostringstream out;
  out << "run,scheduler,rate,repetition,workload_seed,workflows,budget_met,budget_met_pct,mean_makespan,"
         "workflow_cost,fleet_cost,utilization_pct,vm_count";
  for (const auto& t : cloud.catalog) out << ",vm_" << t.name;
  out << ",audit_ok\n";
  for (const auto& r : runs) {
    const auto& rep = r.result.report;
    const auto n = rep.workflows.size();
    const auto met = rep.budget_met_count();
    out << r.spec.id << ',' << to_string(r.spec.scheduler) << ',' << rate_label(r.spec.rate) << ','
        << r.spec.repetition << ',' << r.spec.workload_seed << ',' << n << ',' << met << ','
        << fmt_double(n ? 100.0 * static_cast<double>(met) / static_cast<double>(n) : 0.0, 4) << ','
        << fmt_double(rep.mean_makespan_seconds(), 6) << ',' << rep.workflow_cost_total().to_string(9) << ','
        << rep.fleet.total_cost.to_string(9) << ',' << fmt_double(rep.fleet.utilization_pct, 4) << ','
        << rep.fleet.vm_count;
    for (const auto& t : cloud.catalog) {
      auto it = rep.fleet.vm_count_by_type.find(t.name);
      out << ',' << (it == rep.fleet.vm_count_by_type.end() ? 0 : it->second);
    }
    out << ',' << (r.audit_ok ? 1 : 0) << '\n';
  }
  return out.str();
}

Comparison compare(const MetricsReport& a, const MetricsReport& b) {
  if (a.workload_hash != b.workload_hash) throw ManifestMismatchError("reports cover different workloads");
  if (a.workflows.size() != b.workflows.size()) throw ManifestMismatchError("reports list different workflow counts");
  Comparison c;
  double ratio_sum = 0;
  for (std::size_t i = 0; i < a.workflows.size(); ++i) {
    const auto& wa = a.workflows[i];
    const auto& wb = b.workflows[i];
    if (wa.id != wb.id || wa.budget != wb.budget || wa.arrival != wb.arrival) {
      throw ManifestMismatchError("workflow " + wa.id + " does not match " + wb.id);
    }
    ComparisonRow row;
    row.workflow = wa.id;
    row.makespan_a = to_seconds(wa.makespan);
    row.makespan_b = to_seconds(wb.makespan);
    row.makespan_ratio = row.makespan_b > 0 ? row.makespan_a / row.makespan_b : 1.0;
    row.cost_a = wa.cost;
    row.cost_b = wb.cost;
    row.cost_ratio = wb.cost.picos() > 0 ? static_cast<double>(wa.cost.picos()) / static_cast<double>(wb.cost.picos()) : 1.0;
    ratio_sum += row.makespan_ratio;
    c.rows.push_back(row);
  }
  if (!c.rows.empty()) c.mean_makespan_ratio = ratio_sum / static_cast<double>(c.rows.size());
  const double mk_a = a.mean_makespan_seconds();
  const double mk_b = b.mean_makespan_seconds();
  c.speedup = mk_a > 0 ? mk_b / mk_a : 1.0;
  const auto wc_a = a.workflow_cost_total().picos();
  const auto wc_b = b.workflow_cost_total().picos();
  c.workflow_cost_ratio = wc_b > 0 ? static_cast<double>(wc_a) / static_cast<double>(wc_b) : 1.0;
  const auto fc_a = a.fleet.total_cost.picos();
  const auto fc_b = b.fleet.total_cost.picos();
  c.fleet_cost_ratio = fc_b > 0 ? static_cast<double>(fc_a) / static_cast<double>(fc_b) : 1.0;
  c.vm_count_a = a.fleet.vm_count;
  c.vm_count_b = b.fleet.vm_count;
  c.a_faster = mk_a < mk_b;
  c.a_cheaper = fc_a < fc_b;
  return c;
}

std::string comparison_csv(const Comparison& c) {
  std::ostringstream out;
  out << "workflow,makespan_a,makespan_b,makespan_ratio,cost_a,cost_b,cost_ratio\n";
  for (const auto& r : c.rows) {
    out << r.workflow << ',' << fmt_double(r.makespan_a, 6) << ',' << fmt_double(r.makespan_b, 6) << ','
        << fmt_double(r.makespan_ratio, 6) << ',' << r.cost_a.to_string(9) << ',' << r.cost_b.to_string(9) << ','
        << fmt_double(r.cost_ratio, 6) << '\n';
  }
  out << "# mean_makespan_ratio," << fmt_double(c.mean_makespan_ratio, 6) << '\n';
  out << "# speedup_b_over_a," << fmt_double(c.speedup, 6) << '\n';
  out << "# workflow_cost_ratio," << fmt_double(c.workflow_cost_ratio, 6) << '\n';
  out << "# fleet_cost_ratio," << fmt_double(c.fleet_cost_ratio, 6) << '\n';
  out << "# vm_count_a," << c.vm_count_a << '\n';
  out << "# vm_count_b," << c.vm_count_b << '\n';
  out << "# a_faster," << (c.a_faster ? "yes" : "no") << '\n';
  out << "# a_cheaper," << (c.a_cheaper ? "yes" : "no") << '\n';
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

ExperimentOutputs run_experiment(const ExperimentConfig& config, std::size_t jobs, std::filesystem::path out_dir) {
  if (out_dir.empty()) out_dir = config.output_dir;
  const auto runs = execute_runs(config, jobs);

  std::filesystem::create_directories(out_dir / "runs");
  json manifest_runs = json::array();
  for (const auto& r : runs) {
    const auto base = out_dir / "runs" / r.spec.id;
    write_file(base.string() + ".workflows.csv", workflows_csv(r.result.report));
    write_file(base.string() + ".report.json", to_json(r.result.report).dump(2) + "\n");
    write_file(base.string() + ".assignments.csv", assignment_log_csv(r.result.trace));
    if (config.write_traces) write_file(base.string() + ".trace", checkpoint_trace(r.result.trace));
    manifest_runs.push_back({{"id", r.spec.id},
                             {"scheduler", std::string(to_string(r.spec.scheduler))},
                             {"rate", r.spec.rate},
                             {"repetition", r.spec.repetition},
                             {"workload_seed", r.spec.workload_seed},
                             {"simulation_seed", r.spec.sim_seed},
                             {"workload_hash", hex64(r.result.report.workload_hash)}});
  }

  ExperimentOutputs outputs;
  outputs.runs = runs.size();
  outputs.summary = out_dir / "summary.csv";
  write_file(outputs.summary, summary_csv(runs, config.cloud));

  std::vector<BudgetMetRow> rows;
  for (auto kind : config.schedulers) {
    std::map<double, std::vector<const MetricsReport*>> by_rate;
    for (const auto& r : runs)
      if (r.spec.scheduler == kind) by_rate[r.spec.rate].push_back(&r.result.report);
    auto part = summarize_budget_met(by_rate, std::string(to_string(kind)));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  outputs.budget_met = out_dir / "budget_met.csv";
  write_file(outputs.budget_met, budget_met_csv(rows));

  json manifest = {{"config_hash", hex64(config_hash(config))}, {"config", to_json(config)}, {"runs", manifest_runs}};
  outputs.manifest = out_dir / "manifest.json";
  write_file(outputs.manifest, manifest.dump(2) + "\n");
  return outputs;
}

}  // namespace waas
