#pragma once

#include <optional>
#include <string>

#include "collapselab/stats.hpp"

namespace collapselab {

// CSV schema (header is bit-exact, floats carry 12 significant digits):
//   t,mean_risk,stderr,ci_lo,ci_hi,analytic_risk,reps
// `analytic_risk` is empty when not recorded; analytic-only exports leave
// the Monte Carlo columns empty instead. Lines starting with '#' are
// comments (the run summary goes there) and are skipped on read.
std::string format_sig12(double value);

std::string trajectory_to_csv(const RiskTrajectory& traj,
                              const std::optional<ComparisonReport>& comparison = std::nullopt,
                              double z_threshold = 4.0);

std::string analytic_to_csv(const AnalyticTrajectory& traj);

struct CsvRow {
  long long t = 0;
  std::optional<double> mean, stderr_of_mean, ci_lo, ci_hi, analytic;
  long long reps = 0;
};

struct CsvTable {
  std::vector<CsvRow> rows;
  RiskTrajectory to_trajectory() const;  // requires the Monte Carlo columns
};

CsvTable parse_trajectory_csv(const std::string& text);
CsvTable read_trajectory_csv(const std::string& path);

}  // namespace collapselab
