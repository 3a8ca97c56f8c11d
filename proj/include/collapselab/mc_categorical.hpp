#pragma once

#include <utility>
#include <vector>

#include "collapselab/config.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/simplex.hpp"
#include "collapselab/stats.hpp"

namespace collapselab {

// One replication of an iterative-training run: squared L2 errors
// ||theta_hat_t - theta*||^2 per round, and per-round retained counts in
// filtered mode. Estimates are kept only when recording is enabled.
struct ReplicationResult {
  std::vector<double> squared_errors;
  std::vector<long long> retained_sizes;
  std::vector<std::vector<double>> estimates;
};

// Multinomial(n, theta) counts via inverse-CDF, one uniform per draw.
std::vector<long long> sample_counts(const SimplexVector& theta, long long n, RngStream& rng);

// Empirical frequencies counts / sum(counts).
SimplexVector mle_from_counts(const std::vector<long long>& counts);

// One mixture round: draw n_t samples from alpha_t theta* + (1-alpha_t)
// theta_hat_prev and refit. The fit is source-agnostic.
SimplexVector step_standard(const SimplexVector& theta_hat_prev, const SimplexVector& theta_star,
                            double alpha_t, long long n_t, RngStream& rng);

// Purely synthetic round: samples come from the previous fit alone. The
// truth never enters this code path.
SimplexVector step_synthetic(const SimplexVector& theta_hat_prev, long long n_t, RngStream& rng);

// One pooled round: draw n_t samples from alpha_t theta* + (1-alpha_t) times
// the pooled MLE, add the counts to the pool, return the new pooled MLE.
SimplexVector step_accumulate(std::vector<long long>& count_pool, const SimplexVector& theta_star,
                              double alpha_t, long long n_t, RngStream& rng);

// One filtered round. Each of the n_t draws picks its source (real with
// probability alpha_t), draws a label from that source, and is kept with
// probability 1-e1 (real) or e2 (synthetic), independently of the label.
// A batch with zero retained samples is redrawn whole, up to
// resample_guard attempts.
std::pair<SimplexVector, long long> step_filtered(const SimplexVector& theta_hat_prev,
                                                  const SimplexVector& theta_star, double alpha_t,
                                                  long long n_t, double e1, double e2,
                                                  RngStream& rng,
                                                  long long resample_guard = 1000000);

// Per-round alpha_t and n_t resolved from the config schedules. Adaptive
// alpha consumes the analytic risk of the matching closed-form recurrence.
struct ScheduleTable {
  std::vector<double> alpha;   // index t, alpha[0] unused
  std::vector<long long> n;    // index t
};
ScheduleTable resolve_schedules(const ExperimentConfig& config);

// Full replication, rounds 0..T. Round 0 always draws n0 fresh samples from
// theta*. Deterministic given (config.seed, rep_index).
ReplicationResult run_replication(const ExperimentConfig& config, long long rep_index);

// Runs all replications (parallelizable across workers; the aggregate is
// independent of the execution order) and aggregates per-round risks.
RiskTrajectory run_experiment(const ExperimentConfig& config, int workers = 0);

// Replication matrix for callers that need more than the aggregate (for
// example componentwise estimate means).
std::vector<ReplicationResult> run_replications(const ExperimentConfig& config, int workers = 0);

}  // namespace collapselab
