#include "collapselab/model_zoo.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace collapselab {

namespace {

constexpr double kVarianceFloor = 1e-12;

double log1pexp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct MeanVarFit {
  double mean = 0.0;
  double variance = 0.0;  // biased (MLE), floored
};

MeanVarFit fit_gaussian(const std::vector<double>& data) {
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  return {mean, std::max(kVarianceFloor, ss / n)};
}

double sample_from(const GaussianParams& g, RngStream& rng) {
  return rng.normal(g.mu, std::sqrt(g.sigma2));
}

double sample_from(const MixingMeasure& m, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = m.size() - 1;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc += m.weights[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  return rng.normal(m.atoms[pick].mu, m.atoms[pick].sigma);
}

int resolve_workers(int workers, long long reps) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
  }
  return static_cast<int>(std::min<long long>(workers, reps));
}

}  // namespace

double gaussian_w2sq(const GaussianParams& a, const GaussianParams& b) {
  const double dmu = a.mu - b.mu;
  const double dsd = std::sqrt(a.sigma2) - std::sqrt(b.sigma2);
  return dmu * dmu + dsd * dsd;
}

GaussianParams gaussian_step(const GaussianParams& prev, const GaussianParams& star,
                             double alpha_t, long long n_t, RngStream& rng) {
  if (n_t < 2) throw std::invalid_argument("gaussian fit needs n_t >= 2");
  if (!(alpha_t >= 0.0 && alpha_t <= 1.0)) {
    throw std::invalid_argument("alpha_t must lie in [0, 1]");
  }
  std::vector<double> data(static_cast<std::size_t>(n_t));
  for (auto& x : data) {
    x = sample_from(rng.bernoulli(alpha_t) ? star : prev, rng);
  }
  const MeanVarFit fit = fit_gaussian(data);
  return {fit.mean, fit.variance};
}

MixingMeasure quantile_init(const std::vector<double>& data, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (data.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("need at least k data points");
  }
  std::vector<double> sorted(data);
  std::sort(sorted.begin(), sorted.end());
  const MeanVarFit overall = fit_gaussian(data);
  const double sd = std::max(1e-6, std::sqrt(overall.variance));
  std::vector<GaussAtom> atoms;
  std::vector<double> weights(static_cast<std::size_t>(k), 1.0 / k);
  for (int j = 0; j < k; ++j) {
    const double q = (j + 0.5) / k;
    const auto idx = static_cast<std::size_t>(q * (sorted.size() - 1));
    // Nudge coincident quantiles apart so the measure keeps k atoms.
    atoms.push_back({sorted[idx] + 1e-7 * sd * j, sd});
  }
  return MixingMeasure(std::move(atoms), std::move(weights));
}

EmResult em_fit_gmm(const std::vector<double>& data, int k, const MixingMeasure& init,
                    int max_iters, double tol) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const std::size_t n = data.size();
  if (n < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("need at least k data points");
  }

  const MeanVarFit overall = fit_gaussian(data);
  EmResult result;
  if (overall.variance <= kVarianceFloor) {
    // All observations (nearly) identical: no mixture structure to recover.
    result.measure =
        MixingMeasure({{overall.mean, 1e-6}}, {1.0});
    result.degenerate = true;
    return result;
  }
  if (k == 1) {
    result.measure = MixingMeasure({{overall.mean, std::sqrt(overall.variance)}}, {1.0});
    result.iterations = 1;
    double ll = 0.0;
    for (double x : data) {
      const double z = (x - overall.mean);
      ll += -0.5 * std::log(2.0 * M_PI * overall.variance) - z * z / (2.0 * overall.variance);
    }
    result.log_likelihood = ll;
    return result;
  }

  const double var_floor = std::max(kVarianceFloor, 1e-6 * overall.variance);

  // Working parameters, padded/truncated to k components from the init.
  std::vector<double> w(static_cast<std::size_t>(k), 1.0 / k);
  std::vector<double> mu(static_cast<std::size_t>(k));
  std::vector<double> var(static_cast<std::size_t>(k));
  const MixingMeasure padded = init.size() >= static_cast<std::size_t>(k)
                                   ? init
                                   : quantile_init(data, k);
  for (int j = 0; j < k; ++j) {
    const auto idx = std::min<std::size_t>(j, padded.size() - 1);
    mu[j] = padded.atoms[idx].mu + (idx == static_cast<std::size_t>(j) ? 0.0 : 1e-6 * (j + 1));
    var[j] = std::max(var_floor, padded.atoms[idx].sigma * padded.atoms[idx].sigma);
    w[j] = padded.size() == static_cast<std::size_t>(k) ? padded.weights[j] : 1.0 / k;
  }

  std::vector<double> resp(n * static_cast<std::size_t>(k));
  double prev_ll = -std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    // E-step in log space.
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double max_log = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        const double z = data[i] - mu[j];
        const double lw = (w[j] > 0.0 ? std::log(w[j]) : -745.0) -
                          0.5 * std::log(2.0 * M_PI * var[j]) - z * z / (2.0 * var[j]);
        resp[i * k + j] = lw;
        max_log = std::max(max_log, lw);
      }
      double denom = 0.0;
      for (int j = 0; j < k; ++j) denom += std::exp(resp[i * k + j] - max_log);
      const double log_denom = max_log + std::log(denom);
      ll += log_denom;
      for (int j = 0; j < k; ++j) resp[i * k + j] = std::exp(resp[i * k + j] - log_denom);
    }
    assert(ll >= prev_ll - 1e-8 * (1.0 + std::abs(ll)));
    if (iter > 0 && std::abs(ll - prev_ll) < tol) {
      prev_ll = ll;
      break;
    }
    prev_ll = ll;

    // M-step.
    for (int j = 0; j < k; ++j) {
      double nk = 0.0, sx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        nk += resp[i * k + j];
        sx += resp[i * k + j] * data[i];
      }
      if (nk < 1e-12) {
        // Empty component: keep its location, hand it negligible weight.
        w[j] = 1e-12;
        continue;
      }
      w[j] = nk / static_cast<double>(n);
      mu[j] = sx / nk;
      double sv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double z = data[i] - mu[j];
        sv += resp[i * k + j] * z * z;
      }
      var[j] = std::max(var_floor, sv / nk);
    }
    double wsum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& wj : w) wj /= wsum;
  }

  std::vector<GaussAtom> atoms;
  std::vector<double> weights;
  double wsum = 0.0;
  for (int j = 0; j < k; ++j) {
    atoms.push_back({mu[j], std::sqrt(var[j])});
    weights.push_back(w[j]);
    wsum += w[j];
  }
  for (double& wj : weights) wj /= wsum;
  result.measure = MixingMeasure(std::move(atoms), std::move(weights));
  result.log_likelihood = prev_ll;
  result.iterations = iter;
  return result;
}

double transport_cost(const std::vector<double>& supply, const std::vector<double>& demand,
                      const std::vector<double>& cost) {
  const std::size_t m = supply.size();
  const std::size_t n = demand.size();
  if (m == 0 || n == 0 || cost.size() != m * n) {
    throw std::invalid_argument("inconsistent transport problem");
  }
  if (m == 1) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += demand[j] * cost[j];
    return total;
  }
  if (n == 1) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += supply[i] * cost[i];
    return total;
  }

  // Perturbed marginals keep the simplex nondegenerate; final flows are
  // re-solved on the optimal basis tree with the original marginals.
  constexpr double kEps = 1e-13;
  std::vector<double> s(supply), d(demand);
  double bump = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    s[i] += kEps * static_cast<double>(i + 1);
    bump += kEps * static_cast<double>(i + 1);
  }
  d[n - 1] += bump;

  const std::size_t cells = m * n;
  std::vector<double> flow(cells, 0.0);
  std::vector<char> basic(cells, 0);
  std::vector<std::size_t> basis_cells;

  // Northwest-corner start.
  {
    std::vector<double> srem(s), drem(d);
    std::size_t i = 0, j = 0;
    while (i < m && j < n) {
      const std::size_t c = i * n + j;
      const double move = std::min(srem[i], drem[j]);
      flow[c] = move;
      basic[c] = 1;
      basis_cells.push_back(c);
      srem[i] -= move;
      drem[j] -= move;
      if (i == m - 1 && j == n - 1) break;
      if (srem[i] <= drem[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const std::size_t nodes = m + n;  // rows then columns
  std::vector<double> potential(nodes);
  std::vector<int> parent(nodes);
  std::vector<std::size_t> parent_cell(nodes);

  const int max_pivots = 10000;
  for (int pivot = 0; pivot < max_pivots; ++pivot) {
    // Potentials u_i + v_j = c_ij on the basis tree (u_0 = 0).
    std::vector<char> seen(nodes, 0);
    potential.assign(nodes, 0.0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t node = stack.back();
      stack.pop_back();
      for (std::size_t c : basis_cells) {
        const std::size_t row = c / n, col = m + c % n;
        std::size_t other;
        if (node == row) {
          other = col;
        } else if (node == col) {
          other = row;
        } else {
          continue;
        }
        if (seen[other]) continue;
        seen[other] = 1;
        potential[other] = cost[c] - potential[node];
        stack.push_back(other);
      }
    }

    // Most negative reduced cost enters the basis.
    double best = -1e-12;
    std::size_t entering = cells;
    for (std::size_t c = 0; c < cells; ++c) {
      if (basic[c]) continue;
      const double reduced = cost[c] - potential[c / n] - potential[m + c % n];
      if (reduced < best) {
        best = reduced;
        entering = c;
      }
    }
    if (entering == cells) break;  // optimal

    // Unique tree path from the entering cell's row to its column.
    const std::size_t from = entering / n;
    const std::size_t to = m + entering % n;
    std::fill(parent.begin(), parent.end(), -1);
    parent[from] = static_cast<int>(from);
    std::vector<std::size_t> queue{from};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const std::size_t node = queue[qi];
      for (std::size_t c : basis_cells) {
        const std::size_t row = c / n, col = m + c % n;
        std::size_t other;
        if (node == row) {
          other = col;
        } else if (node == col) {
          other = row;
        } else {
          continue;
        }
        if (parent[other] != -1) continue;
        parent[other] = static_cast<int>(node);
        parent_cell[other] = c;
        queue.push_back(other);
      }
    }

    // Cycle cells alternate signs; entering cell is positive.
    std::vector<std::size_t> minus_cells, plus_cells{entering};
    bool minus_turn = true;
    for (std::size_t node = to; node != from; node = static_cast<std::size_t>(parent[node])) {
      (minus_turn ? minus_cells : plus_cells).push_back(parent_cell[node]);
      minus_turn = !minus_turn;
    }
    double shift = std::numeric_limits<double>::infinity();
    std::size_t leaving = cells;
    for (std::size_t c : minus_cells) {
      if (flow[c] < shift) {
        shift = flow[c];
        leaving = c;
      }
    }
    for (std::size_t c : plus_cells) flow[c] += shift;
    for (std::size_t c : minus_cells) flow[c] -= shift;
    basic[leaving] = 0;
    basic[entering] = 1;
    flow[leaving] = 0.0;
    *std::find(basis_cells.begin(), basis_cells.end(), leaving) = entering;
  }

  // Re-solve flows on the optimal tree with the unperturbed marginals by
  // peeling leaves, then price the plan.
  std::vector<double> residual(nodes);
  for (std::size_t i = 0; i < m; ++i) residual[i] = supply[i];
  for (std::size_t j = 0; j < n; ++j) residual[m + j] = demand[j];
  std::vector<int> degree(nodes, 0);
  std::vector<char> cell_alive(basis_cells.size(), 1);
  for (std::size_t c : basis_cells) {
    ++degree[c / n];
    ++degree[m + c % n];
  }
  double total_cost = 0.0;
  for (std::size_t peeled = 0; peeled + 1 < basis_cells.size() + 1; ++peeled) {
    std::size_t leaf = nodes;
    for (std::size_t v = 0; v < nodes; ++v) {
      if (degree[v] == 1) {
        leaf = v;
        break;
      }
    }
    if (leaf == nodes) break;
    for (std::size_t bi = 0; bi < basis_cells.size(); ++bi) {
      if (!cell_alive[bi]) continue;
      const std::size_t c = basis_cells[bi];
      const std::size_t row = c / n, col = m + c % n;
      if (row != leaf && col != leaf) continue;
      const std::size_t other = (row == leaf) ? col : row;
      const double f = std::max(0.0, residual[leaf]);
      total_cost += f * cost[c];
      residual[other] -= residual[leaf];
      residual[leaf] = 0.0;
      cell_alive[bi] = 0;
      --degree[leaf];
      --degree[other];
      break;
    }
  }
  return total_cost;
}

double mixing_w1(const MixingMeasure& a, const MixingMeasure& b, GroundMetric metric) {
  std::vector<double> supply, demand, cost;
  std::vector<GaussAtom> sa, sb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.weights[i] > 0.0) {
      supply.push_back(a.weights[i]);
      sa.push_back(a.atoms[i]);
    }
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b.weights[j] > 0.0) {
      demand.push_back(b.weights[j]);
      sb.push_back(b.atoms[j]);
    }
  }
  cost.reserve(sa.size() * sb.size());
  for (const auto& pa : sa) {
    for (const auto& pb : sb) {
      const double scale_a = metric == GroundMetric::MuSigma ? pa.sigma : pa.sigma * pa.sigma;
      const double scale_b = metric == GroundMetric::MuSigma ? pb.sigma : pb.sigma * pb.sigma;
      cost.push_back(std::hypot(pa.mu - pb.mu, scale_a - scale_b));
    }
  }
  return transport_cost(supply, demand, cost);
}

LogisticParams logistic_fit(const std::vector<std::array<double, 2>>& features,
                            const std::vector<int>& labels, double ridge, int max_iters) {
  const std::size_t n = features.size();
  if (n < 3) throw std::invalid_argument("logistic fit needs at least 3 observations");
  if (labels.size() != n) throw std::invalid_argument("feature/label size mismatch");

  auto nll = [&](const double th[3]) {
    double value = 0.5 * ridge * (th[0] * th[0] + th[1] * th[1] + th[2] * th[2]);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = th[0] + th[1] * features[i][0] + th[2] * features[i][1];
      value += log1pexp(z) - static_cast<double>(labels[i]) * z;
    }
    return value;
  };

  double theta[3] = {0.0, 0.0, 0.0};
  double current = nll(theta);
  for (int iter = 0; iter < max_iters; ++iter) {
    double g[3] = {ridge * theta[0], ridge * theta[1], ridge * theta[2]};
    double h[3][3] = {{ridge, 0.0, 0.0}, {0.0, ridge, 0.0}, {0.0, 0.0, ridge}};
    for (std::size_t i = 0; i < n; ++i) {
      const double x[3] = {1.0, features[i][0], features[i][1]};
      const double z = theta[0] * x[0] + theta[1] * x[1] + theta[2] * x[2];
      const double p = sigmoid(z);
      const double r = p - static_cast<double>(labels[i]);
      const double wgt = std::max(p * (1.0 - p), 0.0);
      for (int a = 0; a < 3; ++a) {
        g[a] += r * x[a];
        for (int b = 0; b < 3; ++b) h[a][b] += wgt * x[a] * x[b];
      }
    }
    const double gnorm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    if (gnorm < 1e-8) break;

    // Cholesky of the 3x3 Hessian.
    double l[3][3] = {};
    bool ok = true;
    for (int a = 0; a < 3 && ok; ++a) {
      for (int b = 0; b <= a; ++b) {
        double sum = h[a][b];
        for (int c = 0; c < b; ++c) sum -= l[a][c] * l[b][c];
        if (a == b) {
          if (sum <= 1e-300) {
            ok = false;
            break;
          }
          l[a][a] = std::sqrt(sum);
        } else {
          l[a][b] = sum / l[b][b];
        }
      }
    }
    if (!ok) throw std::runtime_error("logistic Hessian is numerically singular");

    // Solve H step = g.
    double y[3], step[3];
    for (int a = 0; a < 3; ++a) {
      double sum = g[a];
      for (int c = 0; c < a; ++c) sum -= l[a][c] * y[c];
      y[a] = sum / l[a][a];
    }
    for (int a = 2; a >= 0; --a) {
      double sum = y[a];
      for (int c = a + 1; c < 3; ++c) sum -= l[c][a] * step[c];
      step[a] = sum / l[a][a];
    }

    double scale = 1.0;
    double proposal[3];
    double next = current;
    for (int halving = 0; halving < 40; ++halving) {
      for (int a = 0; a < 3; ++a) proposal[a] = theta[a] - scale * step[a];
      next = nll(proposal);
      if (next <= current) break;
      scale *= 0.5;
    }
    if (next > current) break;  // no descent direction left at this scale
    theta[0] = proposal[0];
    theta[1] = proposal[1];
    theta[2] = proposal[2];
    current = next;
  }

  LogisticParams out;
  out.theta[0] = theta[0];
  out.theta[1] = theta[1];
  out.theta[2] = theta[2];
  for (double v : out.theta) {
    if (!std::isfinite(v)) throw std::runtime_error("logistic fit diverged");
  }
  return out;
}

LogisticParams logistic_step(const LogisticParams& prev, const LogisticParams& star,
                             double alpha_t, long long n_t, double ridge, int max_iters,
                             RngStream& rng) {
  if (n_t < 3) throw std::invalid_argument("logistic round needs n_t >= 3");
  std::vector<std::array<double, 2>> features(static_cast<std::size_t>(n_t));
  std::vector<int> labels(static_cast<std::size_t>(n_t));
  for (std::size_t i = 0; i < features.size(); ++i) {
    features[i] = {rng.normal(), rng.normal()};
    const LogisticParams& source = rng.bernoulli(alpha_t) ? star : prev;
    const double z =
        source.theta[0] + source.theta[1] * features[i][0] + source.theta[2] * features[i][1];
    labels[i] = rng.bernoulli(sigmoid(z)) ? 1 : 0;
  }
  return logistic_fit(features, labels, ridge, max_iters);
}

double logistic_param_error(const LogisticParams& a, const LogisticParams& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = a.theta[i] - b.theta[i];
    s += d * d;
  }
  return s;
}

namespace {

std::vector<double> family_replication(const ExperimentConfig& config,
                                       const std::vector<double>& alphas,
                                       const std::vector<long long>& sizes, long long rep_index) {
  RngStream rng = RngStream::derive(config.seed, static_cast<std::uint64_t>(rep_index));
  std::vector<double> errors;
  errors.reserve(static_cast<std::size_t>(config.horizon) + 1);

  if (config.family == Family::Gaussian) {
    const GaussianParams star = *config.gaussian_truth;
    std::vector<double> pool;
    auto draw_round = [&](const GaussianParams& source_mix_prev, double a, long long nt) {
      std::vector<double> data(static_cast<std::size_t>(nt));
      for (auto& x : data) {
        x = sample_from((a > 0.0 && rng.bernoulli(a)) ? star : source_mix_prev, rng);
      }
      return data;
    };
    std::vector<double> data0(static_cast<std::size_t>(config.n0));
    for (auto& x : data0) x = sample_from(star, rng);
    MeanVarFit fit = fit_gaussian(data0);
    GaussianParams current{fit.mean, fit.variance};
    if (config.mode == RunMode::Accumulate) pool = data0;
    errors.push_back(gaussian_w2sq(current, star));
    for (long long t = 1; t <= config.horizon; ++t) {
      const double a = alphas[static_cast<std::size_t>(t)];
      const long long nt = sizes[static_cast<std::size_t>(t)];
      if (config.mode == RunMode::Accumulate) {
        const std::vector<double> fresh = draw_round(current, a, nt);
        pool.insert(pool.end(), fresh.begin(), fresh.end());
        const MeanVarFit pooled = fit_gaussian(pool);
        current = {pooled.mean, pooled.variance};
      } else {
        current = gaussian_step(current, star, a, nt, rng);
      }
      errors.push_back(gaussian_w2sq(current, star));
    }
    return errors;
  }

  if (config.family == Family::Gmm) {
    const MixingMeasure star = *config.gmm_truth;
    const GroundMetric metric =
        config.gmm_ground_metric == "sigma2" ? GroundMetric::MuSigma2 : GroundMetric::MuSigma;
    const int k = config.gmm_components;
    std::vector<double> pool;
    std::vector<double> data(static_cast<std::size_t>(config.n0));
    for (auto& x : data) x = sample_from(star, rng);
    if (config.mode == RunMode::Accumulate) pool = data;
    MixingMeasure current =
        em_fit_gmm(data, k, quantile_init(data, k), config.em_max_iters, config.em_tol).measure;
    errors.push_back(mixing_w1(current, star, metric));
    for (long long t = 1; t <= config.horizon; ++t) {
      const double a = alphas[static_cast<std::size_t>(t)];
      const long long nt = sizes[static_cast<std::size_t>(t)];
      std::vector<double> round(static_cast<std::size_t>(nt));
      for (auto& x : round) {
        if (a > 0.0 && rng.bernoulli(a)) {
          x = sample_from(star, rng);
        } else {
          x = sample_from(current, rng);
        }
      }
      const std::vector<double>* fit_data = &round;
      if (config.mode == RunMode::Accumulate) {
        pool.insert(pool.end(), round.begin(), round.end());
        fit_data = &pool;
      }
      // Warm start from the previous round's fit.
      current = em_fit_gmm(*fit_data, k, current, config.em_max_iters, config.em_tol).measure;
      errors.push_back(mixing_w1(current, star, metric));
    }
    return errors;
  }

  const LogisticParams star = *config.logistic_truth;
  std::vector<std::array<double, 2>> pool_x;
  std::vector<int> pool_y;
  auto draw_rows = [&](const LogisticParams& prev, double a, long long nt,
                       std::vector<std::array<double, 2>>& xs, std::vector<int>& ys) {
    for (long long i = 0; i < nt; ++i) {
      const std::array<double, 2> x{rng.normal(), rng.normal()};
      const LogisticParams& source = (a > 0.0 && rng.bernoulli(a)) ? star : prev;
      const double z = source.theta[0] + source.theta[1] * x[0] + source.theta[2] * x[1];
      xs.push_back(x);
      ys.push_back(rng.bernoulli(sigmoid(z)) ? 1 : 0);
    }
  };
  std::vector<std::array<double, 2>> x0;
  std::vector<int> y0;
  draw_rows(star, 1.0, config.n0, x0, y0);
  LogisticParams current = logistic_fit(x0, y0, config.logistic_ridge, 100);
  if (config.mode == RunMode::Accumulate) {
    pool_x = x0;
    pool_y = y0;
  }
  errors.push_back(logistic_param_error(current, star));
  for (long long t = 1; t <= config.horizon; ++t) {
    const double a = alphas[static_cast<std::size_t>(t)];
    const long long nt = sizes[static_cast<std::size_t>(t)];
    if (config.mode == RunMode::Accumulate) {
      draw_rows(current, a, nt, pool_x, pool_y);
      current = logistic_fit(pool_x, pool_y, config.logistic_ridge, 100);
    } else {
      current = logistic_step(current, star, a, nt, config.logistic_ridge, 100, rng);
    }
    errors.push_back(logistic_param_error(current, star));
  }
  return errors;
}

}  // namespace

std::vector<std::vector<double>> run_family_replications(const ExperimentConfig& config,
                                                         int workers) {
  if (config.family == Family::Categorical) {
    throw std::invalid_argument("categorical runs use the dedicated engine");
  }
  if (config.reps < 2) throw std::invalid_argument("reps must be >= 2");

  // Resolve the schedules once; adaptive alpha has no closed form here.
  std::vector<double> alphas(static_cast<std::size_t>(config.horizon) + 1, 0.0);
  std::vector<long long> sizes(static_cast<std::size_t>(config.horizon) + 1, 0);
  sizes[0] = n_at(config.n, 0);
  for (long long t = 1; t <= config.horizon; ++t) {
    const double a =
        config.mode == RunMode::SyntheticOnly ? 0.0 : alpha_at(config.alpha, t);
    alphas[static_cast<std::size_t>(t)] = a;
    sizes[static_cast<std::size_t>(t)] =
        config.n.is_recursive() ? n_at(config.n, t, sizes[static_cast<std::size_t>(t - 1)], a)
                                : n_at(config.n, t);
  }
  long long min_size = config.n0;
  for (long long t = 1; t <= config.horizon; ++t) {
    min_size = std::min(min_size, sizes[static_cast<std::size_t>(t)]);
  }
  if (config.family == Family::Gaussian && min_size < 2) {
    throw std::invalid_argument("gaussian rounds need n >= 2");
  }
  if (config.family == Family::Gmm && min_size < config.gmm_components) {
    throw std::invalid_argument("gmm rounds need n >= k");
  }
  if (config.family == Family::Logistic && min_size < 3) {
    throw std::invalid_argument("logistic rounds need n >= 3");
  }

  std::vector<std::vector<double>> results(static_cast<std::size_t>(config.reps));
  const int worker_count = resolve_workers(workers, config.reps);
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= config.reps) break;
      try {
        results[static_cast<std::size_t>(i)] = family_replication(config, alphas, sizes, i);
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
    for (int w = 0; w < worker_count; ++w) threads.emplace_back(body);
    for (auto& th : threads) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

RiskTrajectory run_family_experiment(const ExperimentConfig& config, int workers) {
  const auto replications = run_family_replications(config, workers);
  AggregateOptions options;
  options.ci_method = config.ci_method;
  options.bootstrap_seed = config.seed;
  RiskTrajectory traj = aggregate(replications, options);
  traj.meta = family_name(config.family) + "/" + mode_name(config.mode) +
              " alpha=" + config.alpha.describe() + " n=" + config.n.describe() +
              " n0=" + std::to_string(config.n0) + " T=" + std::to_string(config.horizon) +
              " reps=" + std::to_string(config.reps) + " seed=" + std::to_string(config.seed);
  return traj;
}

}  // namespace collapselab
