#pragma once

#include <array>
#include <vector>

#include "collapselab/config.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/stats.hpp"

namespace collapselab {

// Squared 2-Wasserstein distance between univariate Gaussians:
// (mu_a - mu_b)^2 + (sd_a - sd_b)^2.
double gaussian_w2sq(const GaussianParams& a, const GaussianParams& b);

// One mixture round for the Gaussian family: each sample comes from the
// truth with probability alpha_t, else from the previous fit; the refit is
// the plain MLE (sample mean, biased variance, floored at 1e-12).
GaussianParams gaussian_step(const GaussianParams& prev, const GaussianParams& star,
                             double alpha_t, long long n_t, RngStream& rng);

struct EmResult {
  MixingMeasure measure;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool degenerate = false;  // collapsed onto (nearly) identical data
};

// EM for univariate Gaussian mixtures from a given initial measure.
// The log-likelihood is nondecreasing across iterations; component
// variances are floored at 1e-6 times the data variance.
EmResult em_fit_gmm(const std::vector<double>& data, int k, const MixingMeasure& init,
                    int max_iters, double tol);

// Spread k atoms over the data quantiles; used to start round 0 before a
// previous fit exists.
MixingMeasure quantile_init(const std::vector<double>& data, int k);

enum class GroundMetric { MuSigma, MuSigma2 };

// Exact 1-Wasserstein distance between mixing measures: a small transport
// LP with Euclidean ground cost on (mu, sigma) atoms (or (mu, sigma^2)).
double mixing_w1(const MixingMeasure& a, const MixingMeasure& b,
                 GroundMetric metric = GroundMetric::MuSigma);

// Exact minimal transport cost between weighted point sets given an
// arbitrary cost matrix (row-major). Solved by the transportation simplex.
double transport_cost(const std::vector<double>& supply, const std::vector<double>& demand,
                      const std::vector<double>& cost);

// Ridge-penalized logistic MLE (intercept + 2 slopes) by Newton iterations
// with step halving; converges when the gradient norm drops below 1e-8.
LogisticParams logistic_fit(const std::vector<std::array<double, 2>>& features,
                            const std::vector<int>& labels, double ridge, int max_iters);

// One mixture round for logistic regression: fresh X ~ N(0, I_2) every
// round, labels generated from the truth with probability alpha_t and from
// the previous fit otherwise.
LogisticParams logistic_step(const LogisticParams& prev, const LogisticParams& star,
                             double alpha_t, long long n_t, double ridge, int max_iters,
                             RngStream& rng);

double logistic_param_error(const LogisticParams& a, const LogisticParams& b);

// Iterative-training loop for the gaussian/gmm/logistic families with the
// family's own error metric (W2^2, mixing-measure W1, parameter L2^2).
RiskTrajectory run_family_experiment(const ExperimentConfig& config, int workers = 0);

std::vector<std::vector<double>> run_family_replications(const ExperimentConfig& config,
                                                         int workers = 0);

}  // namespace collapselab
