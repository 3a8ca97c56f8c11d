#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collapselab/analytic.hpp"

namespace collapselab {

// Streaming (count, sum, sum-of-squares) accumulator with Neumaier
// compensation, mergeable across workers. Merging is associative and
// order-insensitive up to floating-point roundoff.
class MeanVar {
 public:
  void add(double x);
  void merge(const MeanVar& other);

  long long count() const { return count_; }
  double sum() const { return sum_ + sum_comp_; }
  double sum_squares() const { return sumsq_ + sumsq_comp_; }
  double mean() const;
  double sample_variance() const;  // unbiased, clamped at 0
  double stderr_of_mean() const;   // sample sd / sqrt(count)

 private:
  long long count_ = 0;
  double sum_ = 0.0, sum_comp_ = 0.0;
  double sumsq_ = 0.0, sumsq_comp_ = 0.0;
};

// Mean risk per round with uncertainty, optionally paired with an analytic
// overlay of the same horizon.
struct RiskTrajectory {
  std::vector<double> mean;
  std::vector<double> stderr_of_mean;
  std::vector<double> ci_lo;  // 95%
  std::vector<double> ci_hi;
  long long reps = 0;
  std::vector<double> analytic;  // empty when not recorded
  std::string meta;
};

enum class CiMethod { Normal, Bootstrap };

struct AggregateOptions {
  CiMethod ci_method = CiMethod::Normal;
  int bootstrap_samples = 2000;
  std::uint64_t bootstrap_seed = 0;
};

// Mergeable per-round accumulators; the final trajectory is independent of
// how replications were partitioned across workers.
class TrajectoryAccumulator {
 public:
  void add(const std::vector<double>& per_round_values);
  void merge(const TrajectoryAccumulator& other);
  RiskTrajectory finalize() const;

 private:
  std::vector<MeanVar> per_round_;
};

// Aggregates per-replication trajectories (>= 2, equal lengths) into mean,
// standard error and a 95% CI per round. Bootstrap CIs resample replication
// indices and take percentile bounds.
RiskTrajectory aggregate(const std::vector<std::vector<double>>& replications,
                         const AggregateOptions& options = {});

struct ComparisonReport {
  std::vector<double> per_t_z;
  double worst_z = 0.0;
  bool pass = false;
  double coverage_fraction = 0.0;  // fraction of rounds with |z| <= 1.96
};

// Per-round z-scores of the Monte Carlo mean against an analytic trajectory.
// Rounds with zero standard error must match the oracle exactly (degenerate
// truth); otherwise the comparison is an error.
ComparisonReport compare_to_analytic(const RiskTrajectory& traj, const AnalyticTrajectory& oracle,
                                     double z_threshold);
ComparisonReport compare_to_analytic(const RiskTrajectory& traj,
                                     const std::vector<double>& oracle_values, double z_threshold);

struct TrendTest {
  long long s_statistic = 0;
  double z = 0.0;
  double p_two_sided = 1.0;
};

// Mann-Kendall trend test with tie correction; positive z means an
// increasing trend.
TrendTest mann_kendall(const std::vector<double>& values);

}  // namespace collapselab
