#include "collapselab/mc_categorical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "collapselab/analytic.hpp"

namespace collapselab {

namespace {

// Cumulative probabilities for inverse-CDF sampling.
std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  double running = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    running += probs[k];
    cum[k] = running;
  }
  cum.back() = 1.0;  // guard against accumulated rounding
  return cum;
}

std::size_t draw_index(const std::vector<double>& cum, RngStream& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  const std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  return std::min(idx, cum.size() - 1);
}

std::vector<double> mixture(const SimplexVector& star, const SimplexVector& prev, double alpha) {
  std::vector<double> rho(star.size());
  for (std::size_t k = 0; k < star.size(); ++k) {
    rho[k] = alpha * star[k] + (1.0 - alpha) * prev[k];
  }
  return rho;
}

int resolve_workers(int workers, long long reps) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  return static_cast<int>(std::min<long long>(workers, reps));
}

}  // namespace

std::vector<long long> sample_counts(const SimplexVector& theta, long long n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_counts needs n >= 1");
  const std::vector<double> cum = cumulative(theta.probs());
  std::vector<long long> counts(theta.size(), 0);
  for (long long i = 0; i < n; ++i) {
    ++counts[draw_index(cum, rng)];
  }
  return counts;
}

SimplexVector mle_from_counts(const std::vector<long long>& counts) {
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) throw std::invalid_argument("counts must be nonnegative");
    total += c;
  }
  if (total < 1) throw std::invalid_argument("cannot fit an empty sample");
  std::vector<double> probs(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    probs[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return SimplexVector(std::move(probs));
}

SimplexVector step_standard(const SimplexVector& theta_hat_prev, const SimplexVector& theta_star,
                            double alpha_t, long long n_t, RngStream& rng) {
  if (theta_hat_prev.size() != theta_star.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  if (!(alpha_t >= 0.0 && alpha_t <= 1.0)) {
    throw std::invalid_argument("alpha_t must lie in [0, 1]");
  }
  const SimplexVector rho(mixture(theta_star, theta_hat_prev, alpha_t));
  return mle_from_counts(sample_counts(rho, n_t, rng));
}

SimplexVector step_synthetic(const SimplexVector& theta_hat_prev, long long n_t, RngStream& rng) {
  return mle_from_counts(sample_counts(theta_hat_prev, n_t, rng));
}

SimplexVector step_accumulate(std::vector<long long>& count_pool, const SimplexVector& theta_star,
                              double alpha_t, long long n_t, RngStream& rng) {
  const SimplexVector pooled = mle_from_counts(count_pool);
  const std::vector<long long> fresh =
      alpha_t == 0.0 ? sample_counts(pooled, n_t, rng)
                     : sample_counts(SimplexVector(mixture(theta_star, pooled, alpha_t)), n_t, rng);
  for (std::size_t k = 0; k < count_pool.size(); ++k) count_pool[k] += fresh[k];
  return mle_from_counts(count_pool);
}

std::pair<SimplexVector, long long> step_filtered(const SimplexVector& theta_hat_prev,
                                                  const SimplexVector& theta_star, double alpha_t,
                                                  long long n_t, double e1, double e2,
                                                  RngStream& rng, long long resample_guard) {
  if (theta_hat_prev.size() != theta_star.size()) {
    throw std::invalid_argument("dimension mismatch");
  }
  const std::vector<double> cum_star = cumulative(theta_star.probs());
  const std::vector<double> cum_prev = cumulative(theta_hat_prev.probs());
  std::vector<long long> counts(theta_star.size());

  for (long long attempt = 0; attempt < resample_guard; ++attempt) {
    std::fill(counts.begin(), counts.end(), 0);
    long long retained = 0;
    for (long long i = 0; i < n_t; ++i) {
      const bool real_source = rng.bernoulli(alpha_t);
      const std::size_t label = draw_index(real_source ? cum_star : cum_prev, rng);
      const bool keep = rng.bernoulli(real_source ? 1.0 - e1 : e2);
      if (keep) {
        ++counts[label];
        ++retained;
      }
    }
    if (retained >= 1) {
      return {mle_from_counts(counts), retained};
    }
  }
  throw std::runtime_error(
      "degenerate filter: no samples retained after " + std::to_string(resample_guard) +
      " whole-batch redraws (e2 = 0 with alpha = 0 keeps nothing)");
}

ScheduleTable resolve_schedules(const ExperimentConfig& config) {
  ScheduleTable table;
  table.alpha.assign(static_cast<std::size_t>(config.horizon) + 1, 0.0);
  table.n.assign(static_cast<std::size_t>(config.horizon) + 1, 0);
  table.n[0] = n_at(config.n, 0);

  // Adaptive alpha consumes the analytic risk of the matching recurrence,
  // so the mixture weights are the same for every replication.
  double analytic_risk = 0.0;
  double fresh_var = 0.0;
  if (config.alpha.is_adaptive()) {
    if (!config.theta_star.has_value()) {
      throw std::invalid_argument("adaptive alpha needs the categorical truth");
    }
    analytic_risk = initial_risk(*config.theta_star, config.n0);
    fresh_var = 1.0 - config.theta_star->sum_squares();
  }

  for (long long t = 1; t <= config.horizon; ++t) {
    double a;
    if (config.mode == RunMode::SyntheticOnly) {
      a = 0.0;
    } else if (config.alpha.is_adaptive()) {
      a = alpha_at(config.alpha, t, analytic_risk);
    } else {
      a = alpha_at(config.alpha, t);
    }
    const long long nt = config.n.is_recursive()
                             ? n_at(config.n, t, table.n[static_cast<std::size_t>(t - 1)], a)
                             : n_at(config.n, t);
    table.alpha[static_cast<std::size_t>(t)] = a;
    table.n[static_cast<std::size_t>(t)] = nt;

    if (config.alpha.is_adaptive()) {
      if (config.mode == RunMode::Filtered) {
        const FilteredParams fp = filtered_params(a, config.classifier->e1, config.classifier->e2);
        const double moment = nt > config.exact_moment_crossover
                                  ? mean_field_inverse_moment(nt, fp.q)
                                  : truncated_inverse_moment(nt, fp.q);
        analytic_risk = moment * fresh_var +
                        (1.0 - moment) * (1.0 - fp.alpha_tilde) * (1.0 - fp.alpha_tilde) *
                            analytic_risk;
      } else {
        analytic_risk = risk_step(analytic_risk, initial_risk(*config.theta_star, config.n0),
                                  static_cast<double>(config.n0), static_cast<double>(nt), a);
      }
    }
  }
  return table;
}

namespace {

ReplicationResult run_replication_with_tables(const ExperimentConfig& config,
                                              const ScheduleTable& table, long long rep_index) {
  if (config.family != Family::Categorical || !config.theta_star.has_value()) {
    throw std::invalid_argument("categorical engine needs a categorical config");
  }
  const SimplexVector& star = *config.theta_star;
  RngStream rng = RngStream::derive(config.seed, static_cast<std::uint64_t>(rep_index));

  ReplicationResult result;
  result.squared_errors.reserve(static_cast<std::size_t>(config.horizon) + 1);

  std::vector<long long> pool;
  SimplexVector estimate = [&] {
    if (config.mode == RunMode::Accumulate) {
      pool = sample_counts(star, config.n0, rng);
      return mle_from_counts(pool);
    }
    return mle_from_counts(sample_counts(star, config.n0, rng));
  }();

  auto record = [&](const SimplexVector& est) {
    result.squared_errors.push_back(squared_distance(est, star));
    if (config.record_estimates) result.estimates.push_back(est.probs());
  };
  record(estimate);

  for (long long t = 1; t <= config.horizon; ++t) {
    const double a = table.alpha[static_cast<std::size_t>(t)];
    const long long nt = table.n[static_cast<std::size_t>(t)];
    switch (config.mode) {
      case RunMode::Standard:
        estimate = step_standard(estimate, star, a, nt, rng);
        break;
      case RunMode::SyntheticOnly:
        estimate = step_synthetic(estimate, nt, rng);
        break;
      case RunMode::Accumulate:
        estimate = step_accumulate(pool, star, a, nt, rng);
        break;
      case RunMode::Filtered: {
        double e1 = config.classifier->e1;
        double e2 = config.classifier->e2;
        if (config.classifier->mode == ClassifierSpec::Mode::Oracle) {
          e2 = oracle_type2(e1, tv_categorical(star, estimate));
        }
        auto [fitted, retained] =
            step_filtered(estimate, star, a, nt, e1, e2, rng, config.resample_guard);
        estimate = fitted;
        result.retained_sizes.push_back(retained);
        break;
      }
    }
    record(estimate);
  }
  return result;
}

}  // namespace

ReplicationResult run_replication(const ExperimentConfig& config, long long rep_index) {
  return run_replication_with_tables(config, resolve_schedules(config), rep_index);
}

std::vector<ReplicationResult> run_replications(const ExperimentConfig& config, int workers) {
  if (config.reps < 2) throw std::invalid_argument("reps must be >= 2");
  const ScheduleTable table = resolve_schedules(config);
  std::vector<ReplicationResult> results(static_cast<std::size_t>(config.reps));

  const int worker_count = resolve_workers(workers, config.reps);
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= config.reps) break;
      try {
        results[static_cast<std::size_t>(i)] = run_replication_with_tables(config, table, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(config.reps);
        break;
      }
    }
  };

  if (worker_count <= 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) threads.emplace_back(body);
    for (auto& th : threads) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

RiskTrajectory run_experiment(const ExperimentConfig& config, int workers) {
  const std::vector<ReplicationResult> results = run_replications(config, workers);
  // Replications are merged in index order so the aggregate does not depend
  // on which worker produced which replication.
  std::vector<std::vector<double>> trajectories;
  trajectories.reserve(results.size());
  for (const auto& r : results) trajectories.push_back(r.squared_errors);

  AggregateOptions options;
  options.ci_method = config.ci_method;
  options.bootstrap_seed = config.seed;
  RiskTrajectory traj = aggregate(trajectories, options);
  traj.meta = family_name(config.family) + "/" + mode_name(config.mode) +
              " alpha=" + config.alpha.describe() + " n=" + config.n.describe() +
              " n0=" + std::to_string(config.n0) + " T=" + std::to_string(config.horizon) +
              " reps=" + std::to_string(config.reps) + " seed=" + std::to_string(config.seed);
  return traj;
}

}  // namespace collapselab
