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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "waas/errors.hpp"
#include "waas/experiment.hpp"
#include "waas/metrics.hpp"
#include "waas/simulation.hpp"
#include "waas/trace_audit.hpp"
#include "waas/workflow.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitStall = 3;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw waas::Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw waas::Error("cannot write " + path);
  out << content;
}

waas::MetricsReport load_report(const std::filesystem::path& path) {
  return waas::report_from_json(nlohmann::json::parse(slurp(path)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained multi-workflow scheduling simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment sweep from a JSON config");
  std::string config_path;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string out_dir;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");

  auto* cmp = app.add_subcommand("compare", "Compare two run reports over the same workload");
  std::string report_a, report_b, cmp_out;
  cmp->add_option("A", report_a, "Report JSON of scheduler A")->required();
  cmp->add_option("B", report_b, "Report JSON of scheduler B")->required();
  cmp->add_option("-o,--output", cmp_out, "Write the comparison CSV here instead of stdout");

  auto* validate = app.add_subcommand("validate", "Check a workflow document");
  std::string workflow_path;
  validate->add_option("--workflow", workflow_path, "Workflow JSON")->required();

  auto* gen = app.add_subcommand("gen-workload", "Generate a seeded workload from one template");
  std::string template_name;
  int count = 20;
  double rate = 1.0;
  std::uint64_t seed = 1;
  std::string gen_out;
  gen->add_option("--template", template_name, "chr21, chr22, vina01 or vina02")->required();
  gen->add_option("--count", count, "Number of workflows")->check(CLI::PositiveNumber);
  gen->add_option("--rate", rate, "Arrival rate in workflows per minute")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "Workload seed");
  gen->add_option("-o,--output", gen_out, "Write the workload here instead of stdout");

  auto* sim = app.add_subcommand("simulate", "Simulate one workload file");
  std::string workload_path, scheduler_name = "ebpsm", sim_config, trace_out, report_out;
  std::uint64_t sim_seed = 0;
  sim->add_option("--workload", workload_path, "Workload JSON")->required();
  sim->add_option("--scheduler", scheduler_name, "ebpsm, ebpsm-homogeneous or fcfs");
  sim->add_option("--config", sim_config, "Experiment config supplying cloud and estimator settings");
  sim->add_option("--seed", sim_seed, "Variability seed");
  sim->add_option("--trace", trace_out, "Write the checkpoint trace here");
  sim->add_option("--report", report_out, "Write the report JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto config = waas::load_experiment_config(config_path);
      const auto outputs = waas::run_experiment(config, jobs, out_dir);
      std::cout << outputs.runs << " runs\n"
                << "summary: " << outputs.summary.string() << "\n"
                << "budget_met: " << outputs.budget_met.string() << "\n"
                << "manifest: " << outputs.manifest.string() << "\n";
    } else if (*cmp) {
      const auto c = waas::compare(load_report(report_a), load_report(report_b));
      write_or_print(cmp_out, waas::comparison_csv(c));
    } else if (*validate) {
      const auto spec = waas::parse_workflow(slurp(workflow_path));
      std::cout << "ok " << spec.id() << ": " << spec.size() << " tasks, " << spec.edge_count() << " edges, "
                << spec.entry_tasks().size() << " entry, " << spec.exit_tasks().size() << " exit\n";
    } else if (*gen) {
      waas::WorkflowSpec tpl;
      std::vector<waas::Money> budgets;
      try {
        tpl = waas::preset_template(template_name);
        budgets = waas::preset_budgets(template_name);
      } catch (const waas::ArgumentError& e) {
        throw waas::ConfigError("template", e.what());
      }
      std::vector<waas::CatalogEntry> catalog;
      for (auto b : budgets) catalog.push_back({tpl, b});
      const auto workload = waas::generate_workload(catalog, count, rate, seed);
      write_or_print(gen_out, waas::serialize_workload(workload));
    } else if (*sim) {
      auto config = sim_config.empty() ? waas::default_experiment_config() : waas::load_experiment_config(sim_config);
      waas::SimulationOptions opts;
      opts.scheduler = waas::parse_scheduler_kind(scheduler_name);
      opts.cloud = config.cloud_for(opts.scheduler);
      opts.estimator = config.estimator;
      opts.budget = config.budget;
      opts.seed = sim_seed;
      const auto workload = waas::parse_workload(slurp(workload_path));
      const auto result = waas::run_simulation(workload, opts);
      if (!trace_out.empty()) write_or_print(trace_out, waas::checkpoint_trace(result.trace));
      write_or_print(report_out, waas::to_json(result.report).dump(2) + "\n");
      const auto audit = waas::audit_trace(result.trace, workload, opts.cloud);
      if (!audit.ok()) {
        for (const auto& v : audit.violations) std::cerr << "audit: " << v << "\n";
        return kExitFailure;
      }
    }
  } catch (const waas::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const waas::StallError& e) {
    std::cerr << "simulation stall: " << e.what() << "\n";
    return kExitStall;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
