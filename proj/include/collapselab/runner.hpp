#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collapselab/config.hpp"
#include "collapselab/stats.hpp"

namespace collapselab {

struct RunOptions {
  int workers = 0;  // 0 = hardware concurrency; never affects results
  std::optional<std::uint64_t> seed_override;
  std::optional<long long> reps_override;
  std::string out_dir;  // prefix for relative output paths
  double z_threshold = 4.0;
};

struct RunArtifacts {
  RiskTrajectory trajectory;
  std::string csv_path;
  std::string svg_path;  // empty when no plot was requested
  std::optional<ComparisonReport> comparison;
};

// Closed-form trajectory for a categorical config (standard, synthetic-only,
// accumulate with alpha = 0, or filtered with a fixed/random classifier).
AnalyticTrajectory analytic_for_config(const ExperimentConfig& config);

// Full experiment: simulate, aggregate, write CSV (and SVG when requested).
// Output files are written whole on success; nothing is left behind on
// failure.
RunArtifacts run_to_files(const ExperimentConfig& config, const RunOptions& options = {});

// Analytic-only export (no sampling).
std::string run_analytic_to_file(const ExperimentConfig& config, const RunOptions& options = {});

struct PlanRow {
  long long t = 0;
  double alpha = 0.0;
  double n_min = 0.0;       // exact integer while below 2^53
  double risk = 0.0;        // recurrence value using the planned sizes
  bool infeasible = false;  // n_min > 1e9
};

// Iterates the minimal strictly-improving sample size along an alpha
// schedule and evaluates the resulting risk recurrence (r0 = 1 unless the
// caller rescales). alpha_t = 0 anywhere is an error naming the round.
std::vector<PlanRow> plan_schedule(long long n0, const AlphaSchedule& alpha, long long horizon,
                                   double r0 = 1.0);

std::string plan_to_csv(const std::vector<PlanRow>& rows);
std::string plan_to_text(const std::vector<PlanRow>& rows);

struct CsvComparison {
  double worst_z = 0.0;
  double coverage_fraction = 0.0;
  bool pass = false;
  std::size_t rounds = 0;
};

// Two-sample comparison of the mean columns of two trajectory CSVs with
// pooled standard errors.
CsvComparison compare_csv_files(const std::string& path_a, const std::string& path_b,
                                double z_threshold);

}  // namespace collapselab
