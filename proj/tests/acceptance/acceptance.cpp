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

// Acceptance gate: one PASS/FAIL line per criterion.
//
//   acceptance                      run all criteria
//   acceptance --write-golden DIR   regenerate the golden traces into DIR

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "../support/oracles.hpp"
#include "waas/budget.hpp"
#include "waas/errors.hpp"
#include "waas/estimator.hpp"
#include "waas/experiment.hpp"
#include "waas/simulation.hpp"
#include "waas/trace_audit.hpp"
#include "waas/workflow.hpp"

namespace {

using waas::Money;
using waas::SimTime;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Audited {
  const waas::WorkloadSpec* workload;
  waas::CloudConfig cloud;
  waas::Trace trace;
};

// Every simulation run by the criteria lands here for the trace audits.
std::vector<Audited> g_audit_runs;
std::vector<std::unique_ptr<waas::WorkloadSpec>> g_workloads;

const waas::WorkloadSpec& keep(waas::WorkloadSpec w) {
  g_workloads.push_back(std::make_unique<waas::WorkloadSpec>(std::move(w)));
  return *g_workloads.back();
}

waas::SimulationResult simulate(const waas::WorkloadSpec& workload, const waas::SimulationOptions& opts) {
  auto result = waas::run_simulation(workload, opts);
  g_audit_runs.push_back({&workload, opts.cloud, result.trace});
  return result;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. Budget distribution against the brute-force order and split.
Outcome distribution_check() {
  std::mt19937_64 gen(20260101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int identity_failures = 0, order_failures = 0, split_failures = 0;
  const waas::EstimatorConfig oracle_mode;
  for (int i = 0; i < 1000; ++i) {
    const auto catalog = (i % 3 == 0) ? waas::default_t2_catalog() : oracle::random_catalog(gen);
    auto spec = oracle::random_dag(gen, 12, unit(gen) * 0.6, "dag" + std::to_string(i));
    waas::RuntimeEstimator estimator(oracle_mode, catalog);
    waas::CostModel costs(catalog, estimator);
    const auto& reference = catalog[costs.fastest()];
    const auto eft = waas::compute_eft(spec, estimator, reference);

    std::int64_t cheapest = 0, fastest = 0;
    for (const auto& t : spec.tasks()) {
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      for (const auto& k : catalog) lo = std::min(lo, oracle::cost_picos(k, t));
      cheapest += lo;
      fastest += oracle::cost_picos(reference, t);
    }
    // Budgets from well under the cheapest total to beyond the fastest one.
    const auto beta = static_cast<std::int64_t>(unit(gen) * 1.3 * static_cast<double>(std::max(cheapest, fastest)));

    std::vector<std::size_t> all(spec.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto d = waas::distribute_budget(Money::from_picos(beta), spec, all, eft, costs);

    std::int64_t sum = 0;
    bool negative = d.residual.picos() < 0 || d.shortfall.picos() < 0;
    std::set<std::size_t> seen;
    for (const auto& a : d.allocations) {
      sum += a.amount.picos();
      negative = negative || a.amount.picos() < 0;
      seen.insert(a.task);
    }
    if (negative || seen.size() != spec.size() || sum + d.residual.picos() - d.shortfall.picos() != beta ||
        (d.shortfall.picos() > 0 && d.residual.picos() != 0)) {
      ++identity_failures;
    }

    const auto expected_order = oracle::poll_order(spec, all, reference);
    std::vector<std::size_t> got_order;
    for (const auto& a : d.allocations) got_order.push_back(a.task);
    if (got_order != expected_order) ++order_failures;

    const auto split = oracle::distribute(beta, spec, expected_order, catalog);
    bool same = split.residual == d.residual.picos() && split.shortfall == d.shortfall.picos() &&
                split.allocations.size() == d.allocations.size();
    for (std::size_t k = 0; same && k < split.allocations.size(); ++k) {
      same = split.allocations[k].task == d.allocations[k].task &&
             split.allocations[k].picos == d.allocations[k].amount.picos() &&
             catalog[split.allocations[k].type].name == catalog[d.allocations[k].type_index].name;
    }
    if (!same) ++split_failures;
  }
  Outcome o;
  o.pass = identity_failures == 0 && order_failures == 0 && split_failures == 0;
  o.detail = "1000 DAGs; identity failures " + std::to_string(identity_failures) + ", order mismatches " +
             std::to_string(order_failures) + ", split mismatches " + std::to_string(split_failures);
  return o;
}

// 2. Budget update against a naive recomputation after every completion.
Outcome update_check() {
  std::mt19937_64 gen(20260202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const waas::EstimatorConfig oracle_mode;
  int steps = 0, failures = 0, surpluses = 0, debts = 0;
  for (int i = 0; i < 500; ++i) {
    const auto catalog = (i % 2 == 0) ? waas::default_t2_catalog() : oracle::random_catalog(gen);
    auto spec = oracle::random_dag(gen, 12, 0.3, "seq" + std::to_string(i));
    waas::RuntimeEstimator estimator(oracle_mode, catalog);
    waas::CostModel costs(catalog, estimator);
    const auto eft = waas::compute_eft(spec, estimator, catalog[costs.fastest()]);
    std::int64_t cheapest = 0;
    for (const auto& t : spec.tasks()) {
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      for (const auto& k : catalog) lo = std::min(lo, oracle::cost_picos(k, t));
      cheapest += lo;
    }
    const auto beta = static_cast<std::int64_t>((0.6 + unit(gen) * 1.6) * static_cast<double>(cheapest));
    spec = spec.instantiate(spec.id(), Money::from_picos(beta), SimTime{0});

    auto ledger = waas::open_ledger(spec, eft, costs);

    // Oracle state, rebuilt from its own bookkeeping.
    std::map<std::size_t, std::int64_t> held;  // sub-budget of every task not completed
    std::set<std::size_t> unscheduled, in_flight, done;
    std::int64_t spent = 0, debt = 0, remainder = 0;
    auto redistribute = [&](std::int64_t pool) {
      std::vector<std::size_t> pending(unscheduled.begin(), unscheduled.end());
      const auto order = oracle::poll_order(spec, pending, catalog[costs.fastest()]);
      const auto split = oracle::distribute(pool, spec, order, catalog);
      for (const auto& a : split.allocations) held[a.task] = a.picos;
      debt += split.shortfall;
      remainder = split.residual;
    };
    for (std::size_t t = 0; t < spec.size(); ++t) unscheduled.insert(t);
    redistribute(beta);

    auto matches = [&] {
      if (ledger.balance_error() != waas::kZeroMoney) return false;
      if (ledger.spent.picos() != spent || ledger.debt.picos() != debt) return false;
      if (ledger.unassigned.picos() + ledger.spare.picos() != remainder) return false;
      if (ledger.sub_budgets.size() != held.size()) return false;
      for (const auto& [t, b] : held)
        if (ledger.sub_budgets.at(t).picos() != b || b < 0) return false;
      return beta == spent + std::accumulate(held.begin(), held.end(), std::int64_t{0},
                                             [](std::int64_t s, const auto& kv) { return s + kv.second; }) +
                         remainder - debt;
    };
    if (!matches()) ++failures;

    while (done.size() < spec.size()) {
      std::vector<std::size_t> ready;
      for (auto t : unscheduled) {
        bool ok = true;
        for (auto p : spec.task(t).parents) ok = ok && done.contains(p);
        if (ok) ready.push_back(t);
      }
      const bool start = !ready.empty() && (in_flight.empty() || unit(gen) < 0.5);
      if (start) {
        const auto t = ready[static_cast<std::size_t>(unit(gen) * static_cast<double>(ready.size())) % ready.size()];
        waas::mark_scheduled(ledger, t);
        unscheduled.erase(t);
        in_flight.insert(t);
        continue;
      }
      std::vector<std::size_t> running(in_flight.begin(), in_flight.end());
      const auto t = running[static_cast<std::size_t>(unit(gen) * static_cast<double>(running.size())) % running.size()];
      const auto available = ledger.available_for(t, {}).picos();
      const auto actual = static_cast<std::int64_t>(static_cast<double>(available) * (0.3 + 1.5 * unit(gen)));
      (actual <= available ? surpluses : debts)++;
      waas::update_budget(ledger, spec, t, Money::from_picos(actual), eft, costs);

      in_flight.erase(t);
      done.insert(t);
      held.erase(t);
      spent += actual;
      std::int64_t inflight_sum = 0;
      for (auto f : in_flight) inflight_sum += held.at(f);
      std::int64_t pool = beta - spent - inflight_sum + debt;
      if (pool < 0) {
        debt += -pool;
        pool = 0;
      }
      if (unscheduled.empty()) {
        remainder = pool;
      } else {
        for (auto u : unscheduled) held.erase(u);
        redistribute(pool);
      }
      ++steps;
      if (!matches()) ++failures;
    }
  }
  Outcome o;
  o.pass = failures == 0 && surpluses > 0 && debts > 0;
  o.detail = std::to_string(steps) + " completions (" + std::to_string(surpluses) + " surplus, " +
             std::to_string(debts) + " debt); mismatches " + std::to_string(failures);
  return o;
}

waas::CloudConfig zero_delay_cloud() {
  auto c = waas::default_cloud_config();
  c.provisioning_delay = SimTime{0};
  c.deprovisioning_delay = SimTime{0};
  return c;
}

// 3. Zero violations at 1.01x the cheapest total; fewer with variability.
Outcome zero_violation_check() {
  const auto catalog = waas::default_t2_catalog();
  std::vector<waas::CatalogEntry> entries;
  for (const auto& name : waas::preset_template_names()) {
    auto tpl = waas::preset_template(name);
    std::int64_t cheapest = 0;
    for (const auto& t : tpl.tasks()) {
      std::int64_t lo = std::numeric_limits<std::int64_t>::max();
      for (const auto& k : catalog) lo = std::min(lo, oracle::cost_picos(k, t));
      cheapest += lo;
    }
    entries.push_back({tpl, Money::from_picos(cheapest * 101 / 100)});
  }
  const double rates[] = {0.5, 2.0, 6.0, 12.0};
  std::size_t total = 0, met_exact = 0, met_noisy = 0;
  for (int seed = 1; seed <= 50; ++seed) {
    const auto& workload = keep(waas::generate_workload(entries, 20, rates[seed % 4], static_cast<std::uint64_t>(seed)));
    waas::SimulationOptions opts;
    opts.cloud = zero_delay_cloud();
    opts.seed = static_cast<std::uint64_t>(seed);
    const auto exact = simulate(workload, opts);
    opts.cloud.variability = {waas::Variability::Mode::lognormal, 0.15};
    const auto noisy = simulate(workload, opts);
    total += workload.workflows.size();
    met_exact += exact.report.budget_met_count();
    met_noisy += noisy.report.budget_met_count();
  }
  const double exact_pct = 100.0 * static_cast<double>(met_exact) / static_cast<double>(total);
  const double noisy_pct = 100.0 * static_cast<double>(met_noisy) / static_cast<double>(total);
  Outcome o;
  o.pass = met_exact == total && noisy_pct > 50.0 && noisy_pct < 100.0 && noisy_pct < exact_pct;
  o.detail = "sigma 0: " + fmt("%.1f", exact_pct) + "% met; sigma 0.15: " + fmt("%.1f", noisy_pct) + "% met (" +
             std::to_string(total) + " workflows, 50 seeds)";
  return o;
}

// 4. Homogeneous EBPSM against FCFS on one chr22-shaped workflow.
Outcome fcfs_check() {
  auto cloud = waas::default_cloud_config();
  cloud.catalog = {*std::find_if(cloud.catalog.begin(), cloud.catalog.end(),
                                 [](const waas::VmType& t) { return t.name == "t2.micro"; })};
  const auto tpl = waas::genome_template("chr22", 10);
  const std::vector<waas::CatalogEntry> entries = {{tpl, waas::preset_budgets("chr22").back()}};
  int ok = 0;
  double speedup = 0, cost_ratio = 0;
  std::size_t vms_e = 0, vms_f = 0;
  for (int seed = 1; seed <= 20; ++seed) {
    const auto& workload = keep(waas::generate_workload(entries, 1, 1.0, static_cast<std::uint64_t>(seed)));
    waas::SimulationOptions opts;
    opts.cloud = cloud;
    opts.seed = static_cast<std::uint64_t>(seed);
    opts.scheduler = waas::SchedulerKind::ebpsm_homogeneous;
    const auto e = simulate(workload, opts);
    opts.scheduler = waas::SchedulerKind::fcfs;
    const auto f = simulate(workload, opts);
    const auto& we = e.report.workflows.front();
    const auto& wf = f.report.workflows.front();
    if (we.makespan < wf.makespan && f.report.fleet.total_cost < e.report.fleet.total_cost &&
        e.report.fleet.vm_count < f.report.fleet.vm_count) {
      ++ok;
    }
    speedup = waas::to_seconds(wf.makespan) / waas::to_seconds(we.makespan);
    cost_ratio = e.report.fleet.total_cost.dollars() / f.report.fleet.total_cost.dollars();
    vms_e = e.report.fleet.vm_count;
    vms_f = f.report.fleet.vm_count;
  }
  Outcome o;
  o.pass = ok == 20;
  o.detail = std::to_string(ok) + "/20 seeds directional; last seed speedup " + fmt("%.3f", speedup) +
             "x, cost ratio " + fmt("%.3f", cost_ratio) + ", VMs " + std::to_string(vms_e) + " vs " +
             std::to_string(vms_f);
  return o;
}

struct SweepPoint {
  double rate;
  double utilization;
  double vms;
};

std::vector<SweepPoint> g_sweep;

void run_sweep() {
  auto config = waas::default_experiment_config();
  config.repetitions = 20;
  config.arrival_rates = {0.5, 2.0, 6.0, 12.0};
  const auto runs = waas::execute_runs(config, 4);
  for (const auto& r : runs) {
    g_audit_runs.push_back({&keep(r.workload), config.cloud, r.result.trace});
    g_sweep.push_back({r.spec.rate, r.result.report.fleet.utilization_pct,
                       static_cast<double>(r.result.report.fleet.vm_count)});
  }
}

std::map<double, double> mean_by_rate(double SweepPoint::*field) {
  std::map<double, std::pair<double, int>> acc;
  for (const auto& p : g_sweep) {
    acc[p.rate].first += p.*field;
    acc[p.rate].second += 1;
  }
  std::map<double, double> out;
  for (const auto& [rate, a] : acc) out[rate] = a.first / a.second;
  return out;
}

std::string series(const std::map<double, double>& m, const char* f) {
  std::string s;
  for (const auto& [rate, v] : m) s += (s.empty() ? "" : ", ") + fmt("%g", rate) + ":" + fmt(f, v);
  return s;
}

// 6. Utilization non-decreasing in rate with significant positive Spearman.
Outcome utilization_check() {
  run_sweep();
  const auto means = mean_by_rate(&SweepPoint::utilization);
  bool monotone = true;
  double prev = -1;
  for (const auto& [rate, v] : means) {
    monotone = monotone && v >= prev;
    prev = v;
  }
  std::vector<double> x, y;
  for (const auto& p : g_sweep) x.push_back(p.rate), y.push_back(p.utilization);
  const double rho = oracle::spearman(x, y);
  const double n = static_cast<double>(x.size());
  double p_value = 1.0;
  if (std::abs(rho) < 1.0) {
    const double t = rho * std::sqrt((n - 2.0) / (1.0 - rho * rho));
    boost::math::students_t dist(n - 2.0);
    p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  } else {
    p_value = 0.0;
  }
  Outcome o;
  o.pass = monotone && rho > 0 && p_value < 0.05;
  o.detail = "mean utilization % {" + series(means, "%.2f") + "}; spearman " + fmt("%.3f", rho) + ", p " +
             fmt("%.3g", p_value) + " over " + std::to_string(x.size()) + " runs";
  return o;
}

// 7. Mean VM count non-increasing in rate.
Outcome vm_count_check() {
  const auto means = mean_by_rate(&SweepPoint::vms);
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [rate, v] : means) {
    monotone = monotone && v <= prev;
    prev = v;
  }
  Outcome o;
  o.pass = monotone;
  o.detail = "mean VMs per workload {" + series(means, "%.2f") + "}";
  return o;
}

// 8. Identical inputs give byte-identical outputs, regardless of thread count.
Outcome determinism_check() {
  auto config = waas::default_experiment_config();
  config.schedulers = {waas::SchedulerKind::ebpsm, waas::SchedulerKind::ebpsm_homogeneous, waas::SchedulerKind::fcfs};
  config.arrival_rates = {0.5, 12.0};
  config.repetitions = 2;
  config.cloud.variability = {waas::Variability::Mode::lognormal, 0.1};
  config.estimator.mode = waas::EstimatorMode::history;
  const auto tmp = std::filesystem::temp_directory_path() / "waas_acceptance_determinism";
  std::filesystem::remove_all(tmp);
  waas::run_experiment(config, 1, tmp / "a");
  waas::run_experiment(config, 4, tmp / "b");
  std::size_t files = 0, differ = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(tmp / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), tmp / "a");
    ++files;
    if (slurp(entry.path()) != slurp(tmp / "b" / rel)) ++differ;
  }
  const auto runs = waas::execute_runs(config, 2);
  for (const auto& r : runs) g_audit_runs.push_back({&keep(r.workload), config.cloud_for(r.spec.scheduler), r.result.trace});
  std::filesystem::remove_all(tmp);
  Outcome o;
  o.pass = files > 0 && differ == 0;
  o.detail = std::to_string(files) + " files compared across two runs (1 and 4 threads); " + std::to_string(differ) +
             " differ";
  return o;
}

// 5 and 9 audit every trace gathered above.
Outcome idle_bound_check() {
  std::size_t intervals = 0, violations = 0;
  SimTime worst{0};
  for (const auto& r : g_audit_runs) {
    const auto a = waas::audit_idle_bound(r.trace, r.cloud.idle_threshold, r.cloud.scan_interval);
    intervals += a.checked;
    violations += a.violations.size();
    worst = std::max(worst, a.max_observed);
  }
  Outcome o;
  o.pass = violations == 0 && intervals > 0;
  o.detail = std::to_string(g_audit_runs.size()) + " traces, " + std::to_string(intervals) +
             " idle intervals, longest " + fmt("%.3f", waas::to_seconds(worst)) + " s, violations " +
             std::to_string(violations);
  return o;
}

Outcome dependency_check() {
  std::size_t checked = 0, violations = 0;
  for (const auto& r : g_audit_runs) {
    auto a = waas::audit_dependencies(r.trace, *r.workload);
    a.merge(waas::audit_vm_lifecycle(r.trace));
    a.merge(waas::audit_clock(r.trace));
    checked += a.checked;
    violations += a.violations.size();
  }
  Outcome o;
  o.pass = violations == 0 && checked > 0;
  o.detail = std::to_string(g_audit_runs.size()) + " traces, " + std::to_string(checked) + " checks, violations " +
             std::to_string(violations);
  return o;
}

const char* const kGoldenScenarios[] = {"single_task", "diamond", "shared_vm"};

std::string golden_trace(const std::filesystem::path& dir, const std::string& name, bool audit) {
  const auto& workload = keep(waas::parse_workload(slurp(dir / (name + ".workload.json"))));
  waas::SimulationOptions opts;
  const auto result = audit ? simulate(workload, opts) : waas::run_simulation(workload, opts);
  return waas::checkpoint_trace(result.trace);
}

// 10. Committed canonical traces.
Outcome golden_check() {
  const std::filesystem::path dir = std::filesystem::path(WAAS_TEST_DATA_DIR) / "golden";
  std::string detail;
  bool pass = true;
  for (const auto* name : kGoldenScenarios) {
    const auto expected = slurp(dir / (std::string(name) + ".trace"));
    const auto got = golden_trace(dir, name, true);
    const bool same = !expected.empty() && got == expected;
    pass = pass && same;
    detail += std::string(detail.empty() ? "" : ", ") + name + (same ? " match" : " DIFFERS");
  }
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::strcmp(argv[1], "--write-golden") == 0) {
    const std::filesystem::path out = argv[2];
    const std::filesystem::path dir = std::filesystem::path(WAAS_TEST_DATA_DIR) / "golden";
    for (const auto* name : kGoldenScenarios) {
      std::ofstream(out / (std::string(name) + ".trace"), std::ios::binary) << golden_trace(dir, name, false);
    }
    return 0;
  }

  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 when unbounded
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "budget distribution", 10.0, distribution_check},
      {2, "budget update", 10.0, update_check},
      {3, "zero-violation guarantee", 0.0, zero_violation_check},
      {4, "fcfs comparison", 5.0, fcfs_check},
      {6, "utilization trend", 60.0, utilization_check},
      {7, "vm-count trend", 0.0, vm_count_check},
      {8, "determinism", 0.0, determinism_check},
      {10, "golden traces", 0.0, golden_check},
      {5, "idle-termination bound", 0.0, idle_bound_check},
      {9, "dependency safety", 0.0, dependency_check},
  };

  std::map<int, std::string> lines;
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%.0f", c.limit_s) + " s limit";
    }
    if (!o.pass) ++failed;
    char head[128];
    std::snprintf(head, sizeof head, "criterion %2d %s  %-26s", c.id, o.pass ? "PASS" : "FAIL", c.name);
    lines[c.id] = std::string(head) + " " + o.detail + " [" + fmt("%.2f", secs) + " s]";
  }
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
