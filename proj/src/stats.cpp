#include "collapselab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "collapselab/rng.hpp"

namespace collapselab {

namespace {

constexpr double kZ95 = 1.959963984540054;

// Neumaier compensated addition.
void comp_add(double& sum, double& comp, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

void MeanVar::add(double x) {
  ++count_;
  comp_add(sum_, sum_comp_, x);
  comp_add(sumsq_, sumsq_comp_, x * x);
}

void MeanVar::merge(const MeanVar& other) {
  count_ += other.count_;
  comp_add(sum_, sum_comp_, other.sum_);
  comp_add(sum_, sum_comp_, other.sum_comp_);
  comp_add(sumsq_, sumsq_comp_, other.sumsq_);
  comp_add(sumsq_, sumsq_comp_, other.sumsq_comp_);
}

double MeanVar::mean() const {
  if (count_ == 0) throw std::logic_error("mean of empty accumulator");
  return sum() / static_cast<double>(count_);
}

double MeanVar::sample_variance() const {
  if (count_ < 2) throw std::logic_error("sample variance needs >= 2 values");
  const double n = static_cast<double>(count_);
  const double m = mean();
  return std::max(0.0, (sum_squares() - n * m * m) / (n - 1.0));
}

double MeanVar::stderr_of_mean() const {
  return std::sqrt(sample_variance() / static_cast<double>(count_));
}

void TrajectoryAccumulator::add(const std::vector<double>& per_round_values) {
  if (per_round_.empty()) {
    per_round_.resize(per_round_values.size());
  } else if (per_round_.size() != per_round_values.size()) {
    throw std::invalid_argument("replication length mismatch");
  }
  for (std::size_t t = 0; t < per_round_values.size(); ++t) {
    per_round_[t].add(per_round_values[t]);
  }
}

void TrajectoryAccumulator::merge(const TrajectoryAccumulator& other) {
  if (other.per_round_.empty()) return;
  if (per_round_.empty()) {
    per_round_ = other.per_round_;
    return;
  }
  if (per_round_.size() != other.per_round_.size()) {
    throw std::invalid_argument("replication length mismatch");
  }
  for (std::size_t t = 0; t < per_round_.size(); ++t) {
    per_round_[t].merge(other.per_round_[t]);
  }
}

RiskTrajectory TrajectoryAccumulator::finalize() const {
  if (per_round_.empty() || per_round_.front().count() < 2) {
    throw std::invalid_argument("aggregation needs at least 2 replications");
  }
  RiskTrajectory traj;
  traj.reps = per_round_.front().count();
  for (const MeanVar& mv : per_round_) {
    const double m = mv.mean();
    const double se = mv.stderr_of_mean();
    traj.mean.push_back(m);
    traj.stderr_of_mean.push_back(se);
    traj.ci_lo.push_back(m - kZ95 * se);
    traj.ci_hi.push_back(m + kZ95 * se);
  }
  return traj;
}

RiskTrajectory aggregate(const std::vector<std::vector<double>>& replications,
                         const AggregateOptions& options) {
  if (replications.size() < 2) {
    throw std::invalid_argument("aggregation needs at least 2 replications");
  }
  TrajectoryAccumulator acc;
  for (const auto& rep : replications) acc.add(rep);
  RiskTrajectory traj = acc.finalize();

  if (options.ci_method == CiMethod::Bootstrap) {
    const std::size_t reps = replications.size();
    const std::size_t rounds = replications.front().size();
    RngStream rng = RngStream::derive(options.bootstrap_seed, 0xb007ULL);
    std::vector<std::vector<double>> boot_means(rounds);
    std::vector<double> col(reps);
    for (int b = 0; b < options.bootstrap_samples; ++b) {
      std::vector<std::size_t> idx(reps);
      for (auto& i : idx) i = static_cast<std::size_t>(rng.uniform() * reps);
      for (std::size_t t = 0; t < rounds; ++t) {
        double s = 0.0;
        for (std::size_t i : idx) s += replications[i][t];
        boot_means[t].push_back(s / static_cast<double>(reps));
      }
    }
    for (std::size_t t = 0; t < rounds; ++t) {
      auto& bm = boot_means[t];
      std::sort(bm.begin(), bm.end());
      const auto lo = static_cast<std::size_t>(0.025 * (bm.size() - 1));
      const auto hi = static_cast<std::size_t>(std::ceil(0.975 * (bm.size() - 1)));
      traj.ci_lo[t] = bm[lo];
      traj.ci_hi[t] = bm[hi];
    }
  }
  return traj;
}

ComparisonReport compare_to_analytic(const RiskTrajectory& traj,
                                     const std::vector<double>& oracle_values,
                                     double z_threshold) {
  if (traj.mean.size() != oracle_values.size()) {
    throw std::invalid_argument("trajectory and oracle horizons differ");
  }
  ComparisonReport report;
  std::size_t covered = 0;
  for (std::size_t t = 0; t < traj.mean.size(); ++t) {
    const double se = traj.stderr_of_mean[t];
    double z;
    if (se == 0.0) {
      if (std::abs(traj.mean[t] - oracle_values[t]) > 1e-15) {
        throw std::invalid_argument("zero standard error at a nondegenerate round");
      }
      z = 0.0;
    } else {
      z = (traj.mean[t] - oracle_values[t]) / se;
    }
    report.per_t_z.push_back(z);
    report.worst_z = std::max(report.worst_z, std::abs(z));
    if (std::abs(z) <= kZ95) ++covered;
  }
  report.coverage_fraction = static_cast<double>(covered) / static_cast<double>(traj.mean.size());
  report.pass = report.worst_z <= z_threshold;
  return report;
}

ComparisonReport compare_to_analytic(const RiskTrajectory& traj, const AnalyticTrajectory& oracle,
                                     double z_threshold) {
  return compare_to_analytic(traj, oracle.values, z_threshold);
}

TrendTest mann_kendall(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 3) throw std::invalid_argument("trend test needs at least 3 values");
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = values[j] - values[i];
      s += (d > 0.0) - (d < 0.0);
    }
  }
  // Tie correction over groups of equal values.
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double g = static_cast<double>(j - i);
    if (g > 1) tie_term += g * (g - 1.0) * (2.0 * g + 5.0);
    i = j;
  }
  const double nn = static_cast<double>(n);
  const double var_s = (nn * (nn - 1.0) * (2.0 * nn + 5.0) - tie_term) / 18.0;

  TrendTest result;
  result.s_statistic = s;
  if (var_s <= 0.0) return result;
  const double sd = std::sqrt(var_s);
  if (s > 0) {
    result.z = (static_cast<double>(s) - 1.0) / sd;
  } else if (s < 0) {
    result.z = (static_cast<double>(s) + 1.0) / sd;
  }
  result.p_two_sided = 2.0 * normal_sf(std::abs(result.z));
  return result;
}

}  // namespace collapselab
