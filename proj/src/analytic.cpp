#include "collapselab/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace collapselab {

namespace {

constexpr double kPiSqOver6 = 1.6449340668482264;  // zeta(2)

// Convergence flag: relative step change below 1e-10 for 10 consecutive steps.
bool detect_convergence(const std::vector<double>& values) {
  int consecutive = 0;
  for (std::size_t t = 1; t < values.size(); ++t) {
    const double tol = 1e-10 * std::max(1.0, values[t]);
    consecutive = (std::abs(values[t] - values[t - 1]) < tol) ? consecutive + 1 : 0;
    if (consecutive >= 10) return true;
  }
  return false;
}

void check_rate(double e, const char* what) {
  if (!(e >= 0.0 && e <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

double initial_risk(const SimplexVector& theta_star, long long n0) {
  if (n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  return (1.0 - theta_star.sum_squares()) / static_cast<double>(n0);
}

double risk_step(double r_prev, double r0, double n0, double n_t, double alpha_t) {
  if (!(r_prev >= 0.0) || !(r0 >= 0.0)) throw std::invalid_argument("risks must be nonnegative");
  if (!(n_t >= 1.0) || !(n0 >= 1.0)) throw std::invalid_argument("sample sizes must be >= 1");
  check_rate(alpha_t, "alpha_t");
  const double fresh = (n0 / n_t) * r0;
  const double carry = ((n_t - 1.0) / n_t) * (1.0 - alpha_t) * (1.0 - alpha_t) * r_prev;
  return fresh + carry;
}

AnalyticTrajectory risk_trajectory(const SimplexVector& theta_star, long long n0,
                                   const AlphaSchedule& alpha, const SampleSizeSchedule& n,
                                   long long horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  AnalyticTrajectory traj;
  traj.mode = TrajectoryMode::Standard;
  traj.r0 = initial_risk(theta_star, n0);
  traj.values.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.values.push_back(traj.r0);

  long long n_prev = n_at(n, 0);
  for (long long t = 1; t <= horizon; ++t) {
    const double a = alpha.is_adaptive() ? alpha_at(alpha, t, traj.values.back())
                                         : alpha_at(alpha, t);
    const long long nt = n.is_recursive() ? n_at(n, t, n_prev, a) : n_at(n, t);
    traj.values.push_back(risk_step(traj.values.back(), traj.r0, static_cast<double>(n0),
                                    static_cast<double>(nt), a));
    n_prev = nt;
  }
  traj.converged = detect_convergence(traj.values);
  return traj;
}

double limit_fixed(double alpha, long long n, double r0) {
  check_rate(alpha, "alpha");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(r0 >= 0.0)) throw std::invalid_argument("r0 must be nonnegative");
  const double nn = static_cast<double>(n);
  const double b = ((nn - 1.0) / nn) * (1.0 - alpha) * (1.0 - alpha);
  return r0 / (1.0 - b);
}

std::pair<double, double> synthetic_only_bounds(const SampleSizeSchedule& n, long long n0,
                                                double r0, long long t) {
  if (t < 0) throw std::invalid_argument("t must be >= 0");
  if (n0 < 1) throw std::invalid_argument("n0 must be >= 1");
  double lower_sum = 0.0;
  double upper_sum = 0.0;
  for (long long s = 0; s <= t; ++s) {
    const double ns = static_cast<double>(n_at(n, s));
    lower_sum += std::exp2(static_cast<double>(-s)) / ns;
    upper_sum += 1.0 / ns;
  }
  const double scale = static_cast<double>(n0) * r0;
  return {scale * lower_sum, scale * upper_sum};
}

double accumulation_step(double r_prev, double r0, long long n0,
                         std::span<const long long> sizes, AccumulationVariant variant) {
  if (sizes.empty()) throw std::invalid_argument("sizes must be nonempty");
  if (!(r_prev >= 0.0) || !(r0 >= 0.0)) throw std::invalid_argument("risks must be nonnegative");
  double total = 0.0;
  for (long long s : sizes) {
    if (s < 1) throw std::invalid_argument("all sizes must be >= 1");
    total += static_cast<double>(s);
  }
  const double m = static_cast<double>(sizes.back());
  const double s2 = total * total;
  if (s2 <= m) {
    throw std::domain_error("accumulated size too small: S^2 <= n_{t+1}");
  }
  const double fresh = m * static_cast<double>(n0) * r0;
  if (variant == AccumulationVariant::ProofForm) {
    return (1.0 - m / s2) * r_prev + fresh / s2;
  }
  return ((s2 - m) / s2) * r_prev + fresh / (s2 - m);
}

AnalyticTrajectory accumulation_trajectory(const SimplexVector& theta_star, long long n0,
                                           const SampleSizeSchedule& n, long long horizon,
                                           AccumulationVariant variant) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  AnalyticTrajectory traj;
  traj.mode = variant == AccumulationVariant::ProofForm ? TrajectoryMode::AccumulationProofForm
                                                        : TrajectoryMode::AccumulationStatedForm;
  traj.r0 = initial_risk(theta_star, n0);
  traj.values.push_back(traj.r0);

  std::vector<long long> sizes{n_at(n, 0)};
  for (long long t = 1; t <= horizon; ++t) {
    sizes.push_back(n_at(n, t));
    traj.values.push_back(accumulation_step(traj.values.back(), traj.r0, n0, sizes, variant));
  }
  traj.converged = detect_convergence(traj.values);
  return traj;
}

std::pair<double, double> accumulation_limit_bounds(long long n, double r0) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(r0 >= 0.0)) throw std::invalid_argument("r0 must be nonnegative");
  const double lower = r0 * std::exp(-(kPiSqOver6 - 1.0) / static_cast<double>(n));
  const double upper = r0 * (1.0 + kPiSqOver6);
  return {lower, upper};
}

FilteredParams filtered_params(double alpha, double e1, double e2) {
  check_rate(alpha, "alpha");
  check_rate(e1, "e1");
  check_rate(e2, "e2");
  const double q = alpha * (1.0 - e1) + (1.0 - alpha) * e2;
  if (!(q > 0.0)) {
    throw std::domain_error("degenerate filter: retention probability is zero");
  }
  return {alpha * (1.0 - e1) / q, q};
}

double oracle_type2(double e1, double tv) {
  check_rate(e1, "e1");
  check_rate(tv, "tv");
  return std::max(0.0, 1.0 - e1 - tv);
}

double tv_categorical(const SimplexVector& a, const SimplexVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  double l1 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) l1 += std::abs(a[k] - b[k]);
  return 0.5 * l1;
}

double truncated_inverse_moment(long long n, double q) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::domain_error("retention probability must lie in (0, 1]");
  }
  if (q == 1.0) return 1.0 / static_cast<double>(n);

  // sum_{j=1}^{n} (1/j) P(N=j) / P(N>=1), pmf terms in log space so large-n
  // binomial coefficients do not overflow.
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const double lgamma_n1 = std::lgamma(static_cast<double>(n) + 1.0);
  double numerator = 0.0;
  for (long long j = 1; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    const double log_pmf = lgamma_n1 - std::lgamma(jd + 1.0) -
                           std::lgamma(static_cast<double>(n - j) + 1.0) + jd * log_q +
                           static_cast<double>(n - j) * log_1mq;
    numerator += std::exp(log_pmf) / jd;
  }
  const double p_at_least_one = -std::expm1(static_cast<double>(n) * log_1mq);
  return numerator / p_at_least_one;
}

double mean_field_inverse_moment(long long n, double q) {
  const double qn = q * static_cast<double>(n);
  if (!(qn > 0.0)) throw std::domain_error("mean-field moment needs q*n > 0");
  return 1.0 / qn;
}

double filtered_risk_step(double r_prev, const SimplexVector& theta_star, double alpha_tilde,
                          double inv_moment) {
  if (!(r_prev >= 0.0)) throw std::invalid_argument("r_prev must be nonnegative");
  check_rate(alpha_tilde, "alpha_tilde");
  if (!(inv_moment > 0.0 && inv_moment <= 1.0)) {
    throw std::invalid_argument("inv_moment must lie in (0, 1]");
  }
  const double fresh_var = 1.0 - theta_star.sum_squares();
  const double carry = (1.0 - alpha_tilde) * (1.0 - alpha_tilde) * r_prev;
  return inv_moment * fresh_var + (1.0 - inv_moment) * carry;
}

AnalyticTrajectory filtered_risk_trajectory(const SimplexVector& theta_star, long long n0,
                                            const AlphaSchedule& alpha,
                                            const SampleSizeSchedule& n, double e1, double e2,
                                            long long horizon,
                                            const FilteredTrajectoryOptions& options) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  AnalyticTrajectory traj;
  traj.mode = options.mean_field ? TrajectoryMode::FilteredMeanField : TrajectoryMode::FilteredExact;
  traj.r0 = initial_risk(theta_star, n0);
  traj.values.push_back(traj.r0);

  long long n_prev = n_at(n, 0);
  for (long long t = 1; t <= horizon; ++t) {
    const double a = alpha.is_adaptive() ? alpha_at(alpha, t, traj.values.back())
                                         : alpha_at(alpha, t);
    const long long nt = n.is_recursive() ? n_at(n, t, n_prev, a) : n_at(n, t);
    const FilteredParams fp = filtered_params(a, e1, e2);
    const double moment = (options.mean_field || nt > options.exact_crossover)
                              ? mean_field_inverse_moment(nt, fp.q)
                              : truncated_inverse_moment(nt, fp.q);
    traj.values.push_back(
        filtered_risk_step(traj.values.back(), theta_star, fp.alpha_tilde, moment));
    n_prev = nt;
  }
  traj.converged = detect_convergence(traj.values);
  return traj;
}

double adaptive_risk_bound(double lambda, std::optional<long long> n, double r0) {
  if (!(lambda > 1.0)) throw std::domain_error("adaptive risk bound needs lambda > 1");
  if (!n.has_value()) return 1.0 / lambda;
  if (*n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(r0 >= 0.0)) throw std::invalid_argument("r0 must be nonnegative");
  const double nn = static_cast<double>(*n);
  return r0 + (nn - 1.0) / (lambda * nn);
}

double population_gaussian_update(double mu_star, double theta0, double alpha) {
  check_rate(alpha, "alpha");
  return alpha * mu_star + (1.0 - alpha) * theta0;
}

std::vector<double> corrected_estimate(const SimplexVector& theta_t,
                                       const SimplexVector& theta_next, double alpha_hat) {
  if (theta_t.size() != theta_next.size()) throw std::invalid_argument("dimension mismatch");
  if (!(alpha_hat > 0.0 && alpha_hat <= 1.0)) {
    throw std::domain_error("alpha_hat must lie in (0, 1]");
  }
  std::vector<double> corrected(theta_t.size());
  for (std::size_t k = 0; k < theta_t.size(); ++k) {
    corrected[k] = theta_t[k] + (theta_next[k] - theta_t[k]) / alpha_hat;
  }
  return corrected;
}

}  // namespace collapselab
