#include "collapselab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "collapselab/csv.hpp"
#include "collapselab/mc_categorical.hpp"
#include "collapselab/model_zoo.hpp"
#include "collapselab/svg_plot.hpp"

namespace collapselab {

namespace {

std::string resolve_path(const std::string& out_dir, const std::string& path) {
  if (out_dir.empty() || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(out_dir) / p).string();
}

void write_whole_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions& options) {
  if (options.seed_override) config.seed = *options.seed_override;
  if (options.reps_override) {
    if (*options.reps_override < 2) throw std::invalid_argument("reps override must be >= 2");
    config.reps = *options.reps_override;
  }
  return config;
}

}  // namespace

AnalyticTrajectory analytic_for_config(const ExperimentConfig& config) {
  if (config.family != Family::Categorical || !config.theta_star.has_value()) {
    throw std::invalid_argument("closed forms exist for the categorical family only");
  }
  const SimplexVector& star = *config.theta_star;
  switch (config.mode) {
    case RunMode::Standard:
      return risk_trajectory(star, config.n0, config.alpha, config.n, config.horizon);
    case RunMode::SyntheticOnly:
      return risk_trajectory(star, config.n0, AlphaSchedule::zero(), config.n, config.horizon);
    case RunMode::Accumulate:
      if (!config.alpha.is_zero()) {
        throw std::invalid_argument("the accumulation recurrence covers alpha = zero only");
      }
      return accumulation_trajectory(star, config.n0, config.n, config.horizon,
                                     config.accumulation_variant);
    case RunMode::Filtered: {
      if (!config.classifier.has_value() ||
          config.classifier->mode == ClassifierSpec::Mode::Oracle) {
        throw std::invalid_argument("no closed form for oracle-classifier runs");
      }
      FilteredTrajectoryOptions options;
      options.exact_crossover = config.exact_moment_crossover;
      return filtered_risk_trajectory(star, config.n0, config.alpha, config.n,
                                      config.classifier->e1, config.classifier->e2, config.horizon,
                                      options);
    }
  }
  throw std::logic_error("unhandled mode");
}

RunArtifacts run_to_files(const ExperimentConfig& raw_config, const RunOptions& options) {
  const ExperimentConfig config = apply_overrides(raw_config, options);

  RunArtifacts artifacts;
  artifacts.trajectory = config.family == Family::Categorical
                             ? run_experiment(config, options.workers)
                             : run_family_experiment(config, options.workers);

  if (config.outputs.record_analytic) {
    const AnalyticTrajectory oracle = analytic_for_config(config);
    artifacts.trajectory.analytic = oracle.values;
    artifacts.comparison =
        compare_to_analytic(artifacts.trajectory, oracle, options.z_threshold);
  }

  // Render everything before touching the filesystem so a failed run leaves
  // no partial artifacts behind.
  const std::string csv_text =
      trajectory_to_csv(artifacts.trajectory, artifacts.comparison, options.z_threshold);
  std::string svg_text;
  if (!config.outputs.svg_path.empty()) {
    PlotOptions plot;
    plot.log_y = config.outputs.log_y;
    plot.title = artifacts.trajectory.meta;
    svg_text = render_trajectory_svg(artifacts.trajectory, plot);
  }

  artifacts.csv_path = resolve_path(options.out_dir, config.outputs.csv_path);
  write_whole_file(artifacts.csv_path, csv_text);
  if (!svg_text.empty()) {
    artifacts.svg_path = resolve_path(options.out_dir, config.outputs.svg_path);
    write_whole_file(artifacts.svg_path, svg_text);
  }
  return artifacts;
}

std::string run_analytic_to_file(const ExperimentConfig& raw_config, const RunOptions& options) {
  const ExperimentConfig config = apply_overrides(raw_config, options);
  const AnalyticTrajectory traj = analytic_for_config(config);
  const std::string path = resolve_path(options.out_dir, config.outputs.csv_path);
  write_whole_file(path, analytic_to_csv(traj));
  return path;
}

std::vector<PlanRow> plan_schedule(long long n0, const AlphaSchedule& alpha, long long horizon,
                                   double r0) {
  if (n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (alpha.is_adaptive()) {
    throw std::invalid_argument("planning needs a deterministic alpha schedule");
  }
  std::vector<PlanRow> rows;
  double n_prev = static_cast<double>(n0);
  double risk = r0;
  const double n0d = static_cast<double>(n0);
  for (long long t = 1; t <= horizon; ++t) {
    const double a = alpha_at(alpha, t);
    if (a == 0.0) {
      throw std::domain_error("alpha_t is 0 at t=" + std::to_string(t) +
                              "; no finite improving sample size exists");
    }
    PlanRow row;
    row.t = t;
    row.alpha = a;
    row.n_min = improvement_min_sample_real(n_prev, a);
    row.infeasible = row.n_min > 1e9;
    risk = risk_step(risk, r0, n0d, row.n_min, a);
    row.risk = risk;
    rows.push_back(row);
    n_prev = row.n_min;
  }
  return rows;
}

std::string plan_to_csv(const std::vector<PlanRow>& rows) {
  std::ostringstream out;
  out << "t,alpha,n_min,risk,infeasible\n";
  for (const PlanRow& row : rows) {
    out << row.t << ',' << format_sig12(row.alpha) << ',' << format_sig12(row.n_min) << ','
        << format_sig12(row.risk) << ',' << (row.infeasible ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string plan_to_text(const std::vector<PlanRow>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%6s  %12s  %16s  %14s\n", "t", "alpha_t", "min n_t",
                "risk (r0=1)");
  out << line;
  bool warned = false;
  for (const PlanRow& row : rows) {
    std::snprintf(line, sizeof(line), "%6lld  %12.6g  %16.10g  %14.8g%s\n", row.t, row.alpha,
                  row.n_min, row.risk, row.infeasible ? "  [> 1e9]" : "");
    out << line;
    warned = warned || row.infeasible;
  }
  if (warned) {
    out << "warning: some rounds need more than 1e9 samples; the schedule is "
           "infeasible at that scale\n";
  }
  return out.str();
}

CsvComparison compare_csv_files(const std::string& path_a, const std::string& path_b,
                                double z_threshold) {
  const CsvTable a = read_trajectory_csv(path_a);
  const CsvTable b = read_trajectory_csv(path_b);
  if (a.rows.size() != b.rows.size()) {
    throw std::runtime_error("csv files cover different horizons");
  }
  CsvComparison result;
  result.rounds = a.rows.size();
  std::size_t covered = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const CsvRow& ra = a.rows[i];
    const CsvRow& rb = b.rows[i];
    if (!ra.mean || !rb.mean || !ra.stderr_of_mean || !rb.stderr_of_mean) {
      throw std::runtime_error("csv rows lack mean/stderr columns");
    }
    const double pooled =
        std::sqrt(*ra.stderr_of_mean * *ra.stderr_of_mean + *rb.stderr_of_mean * *rb.stderr_of_mean);
    double z = 0.0;
    if (pooled > 0.0) {
      z = (*ra.mean - *rb.mean) / pooled;
    } else if (*ra.mean != *rb.mean) {
      throw std::runtime_error("zero pooled stderr with differing means at t=" +
                               std::to_string(ra.t));
    }
    result.worst_z = std::max(result.worst_z, std::abs(z));
    if (std::abs(z) <= 1.959963984540054) ++covered;
  }
  result.coverage_fraction =
      result.rounds == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(result.rounds);
  result.pass = result.worst_z <= z_threshold;
  return result;
}

}  // namespace collapselab
