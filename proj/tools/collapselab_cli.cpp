// Command-line front end: config-driven Monte Carlo runs, analytic
// trajectories, improvement-schedule planning and CSV comparison.
//
// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "collapselab/config.hpp"
#include "collapselab/runner.hpp"
#include "collapselab/schedules.hpp"

namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<long long> reps;
  int workers = 0;
  std::string out_dir;
};

collapselab::RunOptions to_options(const CommonFlags& flags) {
  collapselab::RunOptions options;
  options.seed_override = flags.seed;
  options.reps_override = flags.reps;
  options.workers = flags.workers;
  options.out_dir = flags.out_dir;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative-training risk laboratory: Monte Carlo runs, exact "
               "recurrences and sample-size planning"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;

  auto* run_cmd = app.add_subcommand("run", "Simulate an experiment config and write CSV/SVG");
  run_cmd->add_option("config", config_path, "experiment config file")->required();
  run_cmd->add_option("--seed", flags.seed, "override the config seed");
  run_cmd->add_option("--reps", flags.reps, "override the replication count");
  run_cmd->add_option("--workers", flags.workers, "worker threads (results never depend on this)");
  run_cmd->add_option("--out-dir", flags.out_dir, "directory prefix for relative output paths");

  auto* analytic_cmd =
      app.add_subcommand("analytic", "Write the closed-form trajectory for a config (no sampling)");
  analytic_cmd->add_option("config", config_path, "experiment config file")->required();
  analytic_cmd->add_option("--out-dir", flags.out_dir, "directory prefix for relative output paths");

  auto* plan_cmd = app.add_subcommand(
      "plan-schedule", "Minimal per-round sample sizes that keep the risk strictly decreasing");
  long long plan_n0 = 10;
  long long plan_horizon = 10;
  std::string plan_kind = "power-decay";
  double plan_a0 = 1.0;
  double plan_p = 1.0;
  std::string plan_csv;
  plan_cmd->add_option("--n0", plan_n0, "round-0 sample size")->required();
  plan_cmd->add_option("--T", plan_horizon, "planning horizon")->required();
  plan_cmd->add_option("--kind", plan_kind, "alpha kind: constant | power-decay | log-decay")
      ->check(CLI::IsMember({"constant", "power-decay", "log-decay"}));
  plan_cmd->add_option("--a0", plan_a0, "alpha scale");
  plan_cmd->add_option("--p", plan_p, "power-decay exponent");
  plan_cmd->add_option("--csv", plan_csv, "also write the table as CSV");

  auto* compare_cmd = app.add_subcommand("compare", "Compare the mean columns of two trajectory CSVs");
  std::string csv_a, csv_b;
  double z_threshold = 4.0;
  compare_cmd->add_option("csv_a", csv_a, "first trajectory CSV")->required();
  compare_cmd->add_option("csv_b", csv_b, "second trajectory CSV")->required();
  compare_cmd->add_option("--z", z_threshold, "pass threshold on |z| (default 4)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      collapselab::ExperimentConfig config;
      try {
        config = collapselab::load_config_file(config_path);
      } catch (const collapselab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
      const auto artifacts = collapselab::run_to_files(config, to_options(flags));
      std::cout << "wrote " << artifacts.csv_path;
      if (!artifacts.svg_path.empty()) std::cout << " and " << artifacts.svg_path;
      std::cout << "\n";
      if (artifacts.comparison) {
        std::cout << "analytic comparison: worst |z| = " << artifacts.comparison->worst_z
                  << ", coverage = " << artifacts.comparison->coverage_fraction
                  << (artifacts.comparison->pass ? " [pass]" : " [FAIL]") << "\n";
      }
      return 0;
    }

    if (analytic_cmd->parsed()) {
      collapselab::ExperimentConfig config;
      try {
        config = collapselab::load_config_file(config_path);
      } catch (const collapselab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
      }
      const std::string path = collapselab::run_analytic_to_file(config, to_options(flags));
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (plan_cmd->parsed()) {
      collapselab::AlphaSchedule alpha = collapselab::AlphaSchedule::constant(1.0);
      try {
        if (plan_kind == "constant") {
          alpha = collapselab::AlphaSchedule::constant(plan_a0);
        } else if (plan_kind == "power-decay") {
          alpha = collapselab::AlphaSchedule::power_decay(plan_a0, plan_p);
        } else {
          alpha = collapselab::AlphaSchedule::log_decay(plan_a0);
        }
      } catch (const std::invalid_argument& e) {
        std::cerr << "schedule error: " << e.what() << "\n";
        return 1;
      }
      const auto rows = collapselab::plan_schedule(plan_n0, alpha, plan_horizon);
      std::cout << collapselab::plan_to_text(rows);
      if (!plan_csv.empty()) {
        const auto path = flags.out_dir.empty() ? plan_csv : flags.out_dir + "/" + plan_csv;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open '" + path + "'");
        out << collapselab::plan_to_csv(rows);
        std::cout << "wrote " << path << "\n";
      }
      return 0;
    }

    if (compare_cmd->parsed()) {
      const auto result = collapselab::compare_csv_files(csv_a, csv_b, z_threshold);
      std::printf("rounds=%zu worst_z=%.6g coverage=%.4f %s\n", result.rounds, result.worst_z,
                  result.coverage_fraction, result.pass ? "PASS" : "FAIL");
      return result.pass ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
