#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "collapselab/schedules.hpp"
#include "collapselab/simplex.hpp"

namespace collapselab {

enum class TrajectoryMode {
  Standard,
  AccumulationProofForm,
  AccumulationStatedForm,
  FilteredExact,
  FilteredMeanField,
};

// Closed-form risk trajectory R_0..R_T. `converged` is finite-horizon
// evidence only: true when |R_t - R_{t-1}| < 1e-10 * max(1, R_t) held for
// 10 consecutive steps before the horizon.
struct AnalyticTrajectory {
  double r0 = 0.0;
  std::vector<double> values;
  TrajectoryMode mode = TrajectoryMode::Standard;
  bool converged = false;
};

// R_0 = (1 - ||theta*||_2^2) / n0, the one-round risk of the empirical
// frequency estimator on n0 fresh samples.
double initial_risk(const SimplexVector& theta_star, long long n0);

// One step of the risk recurrence:
//   R_t = (n0/n_t) R_0 + ((n_t - 1)/n_t) (1 - alpha_t)^2 R_{t-1}.
// Sizes are doubles so planning chains beyond 2^63 still evaluate.
double risk_step(double r_prev, double r0, double n0, double n_t, double alpha_t);

AnalyticTrajectory risk_trajectory(const SimplexVector& theta_star, long long n0,
                                   const AlphaSchedule& alpha, const SampleSizeSchedule& n,
                                   long long horizon);

// Fixed-(alpha, n) limit R_0 * (1 - ((n-1)/n)(1-alpha)^2)^{-1}; equals R_0
// at alpha = 1 and n*R_0 at alpha = 0.
double limit_fixed(double alpha, long long n, double r0);

// Purely synthetic regime sandwich:
//   n0 R0 * sum_{s<=t} 1/(2^s n_s)  <  R_t  <  n0 R0 * sum_{s<=t} 1/n_s.
std::pair<double, double> synthetic_only_bounds(const SampleSizeSchedule& n, long long n0,
                                                double r0, long long t);

enum class AccumulationVariant { ProofForm, StatedForm };

// One step of the pooled-data risk recurrence. `sizes` holds n_0..n_{t+1};
// with S their sum and m the last entry,
//   proof form:   (1 - m/S^2) r_prev + m n0 R0 / S^2
//   stated form:  ((S^2 - m)/S^2) r_prev + m n0 R0 / (S^2 - m).
// The two appear in the same source with different denominators; the proof
// form follows from the exact variance decomposition and is the default.
double accumulation_step(double r_prev, double r0, long long n0,
                         std::span<const long long> sizes, AccumulationVariant variant);

AnalyticTrajectory accumulation_trajectory(const SimplexVector& theta_star, long long n0,
                                           const SampleSizeSchedule& n, long long horizon,
                                           AccumulationVariant variant);

// Limit bounds for pooled training at fixed per-round size n:
//   [ R0 exp(-(pi^2/6 - 1)/n),  R0 (1 + pi^2/6) ].
std::pair<double, double> accumulation_limit_bounds(long long n, double r0);

struct FilteredParams {
  double alpha_tilde = 0.0;  // post-filter mixture weight of the truth
  double q = 0.0;            // per-sample retention probability
};

// q = alpha(1-e1) + (1-alpha) e2 and alpha~ = alpha(1-e1)/q for a classifier
// with type-1 rate e1 and type-2 rate e2 applied to the mixture.
FilteredParams filtered_params(double alpha, double e1, double e2);

// Information-theoretic optimum for a fixed type-1 rate: e2 = 1 - e1 - TV,
// clamped at 0.
double oracle_type2(double e1, double tv);

// Total variation distance between categorical distributions (half L1).
double tv_categorical(const SimplexVector& a, const SimplexVector& b);

// E[1/N | N >= 1] for N ~ Binomial(n, q), by exact pmf summation in log
// space. O(n); use the mean-field value for very large n.
double truncated_inverse_moment(long long n, double q);

// Mean-field approximation 1/(q n) of the truncated inverse moment.
double mean_field_inverse_moment(long long n, double q);

// One step of the filtered-risk recurrence:
//   R~_t = m (1 - ||theta*||^2) + (1 - m)(1 - alpha~)^2 R~_{t-1},
// where m is E[1/n~_t | n~_t >= 1].
double filtered_risk_step(double r_prev, const SimplexVector& theta_star, double alpha_tilde,
                          double inv_moment);

struct FilteredTrajectoryOptions {
  bool mean_field = false;             // always use 1/(qn) instead of the exact moment
  long long exact_crossover = 100000;  // exact summation above this size falls back to mean field
};

AnalyticTrajectory filtered_risk_trajectory(const SimplexVector& theta_star, long long n0,
                                            const AlphaSchedule& alpha,
                                            const SampleSizeSchedule& n, double e1, double e2,
                                            long long horizon,
                                            const FilteredTrajectoryOptions& options = {});

// Risk ceiling under adaptive mixture weights with gain lambda > 1:
// R0 + (n-1)/(lambda n) at fixed size n, or 1/lambda when n_t grows to
// infinity (pass nullopt).
double adaptive_risk_bound(double lambda, std::optional<long long> n, double r0);

// Population-level KL projection of the one-step mixture for a unit-variance
// Gaussian family: theta_1 = alpha mu* + (1-alpha) theta_0. Contracts toward
// mu* whenever alpha > 0.
double population_gaussian_update(double mu_star, double theta0, double alpha);

// Debiased estimate theta_t + (theta_{t+1} - theta_t)/alpha_hat, returned
// raw (may leave the simplex; see project_to_simplex).
std::vector<double> corrected_estimate(const SimplexVector& theta_t,
                                       const SimplexVector& theta_next, double alpha_hat);

}  // namespace collapselab
