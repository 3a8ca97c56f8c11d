#include "collapselab/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace collapselab {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

void check_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

AlphaSchedule AlphaSchedule::constant(double a0) {
  check_unit_interval(a0, "constant alpha");
  AlphaSchedule s;
  s.kind = AlphaKind::Constant;
  s.a0 = a0;
  return s;
}

AlphaSchedule AlphaSchedule::power_decay(double a0, double p) {
  if (!(a0 > 0.0 && a0 <= 1.0)) {
    throw std::invalid_argument("power-decay requires a0 in (0, 1]");
  }
  if (!(p >= 0.0)) {
    throw std::invalid_argument("power-decay requires p >= 0");
  }
  AlphaSchedule s;
  s.kind = AlphaKind::PowerDecay;
  s.a0 = a0;
  s.p = p;
  return s;
}

AlphaSchedule AlphaSchedule::log_decay(double a0) {
  if (!(a0 > 0.0 && a0 <= 1.0)) {
    throw std::invalid_argument("log-decay requires a0 in (0, 1]");
  }
  AlphaSchedule s;
  s.kind = AlphaKind::LogDecay;
  s.a0 = a0;
  return s;
}

AlphaSchedule AlphaSchedule::adaptive(double lambda, AdaptiveForm form) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("adaptive alpha requires lambda > 0");
  }
  AlphaSchedule s;
  s.kind = AlphaKind::Adaptive;
  s.lambda = lambda;
  s.form = form;
  return s;
}

AlphaSchedule AlphaSchedule::explicit_values(std::vector<double> values) {
  for (double v : values) check_unit_interval(v, "explicit alpha value");
  AlphaSchedule s;
  s.kind = AlphaKind::Explicit;
  s.values = std::move(values);
  return s;
}

AlphaSchedule AlphaSchedule::zero() {
  AlphaSchedule s;
  s.kind = AlphaKind::Zero;
  return s;
}

std::string AlphaSchedule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case AlphaKind::Constant: os << "constant(" << a0 << ")"; break;
    case AlphaKind::PowerDecay: os << "power-decay(" << a0 << ", p=" << p << ")"; break;
    case AlphaKind::LogDecay: os << "log-decay(" << a0 << ")"; break;
    case AlphaKind::Adaptive:
      os << "adaptive(lambda=" << lambda << ", "
         << (form == AdaptiveForm::Reciprocal ? "reciprocal" : "exponential") << ")";
      break;
    case AlphaKind::Explicit: os << "explicit[" << values.size() << "]"; break;
    case AlphaKind::Zero: os << "zero"; break;
  }
  return os.str();
}

double alpha_at(const AlphaSchedule& schedule, long long t, std::optional<double> r_prev) {
  if (t < 1) throw std::invalid_argument("alpha_t is defined for t >= 1");
  if (schedule.kind == AlphaKind::Adaptive) {
    if (!r_prev.has_value()) {
      throw std::invalid_argument("adaptive alpha schedule needs the previous risk r_prev");
    }
    if (!(*r_prev >= 0.0)) {
      throw std::invalid_argument("r_prev must be nonnegative");
    }
  } else if (r_prev.has_value()) {
    throw std::invalid_argument("r_prev is only meaningful for adaptive schedules");
  }

  switch (schedule.kind) {
    case AlphaKind::Constant:
      return schedule.a0;
    case AlphaKind::PowerDecay:
      // t = 1 gives a0 exactly (pow(1, p) == 1).
      return clamp01(schedule.a0 / std::pow(static_cast<double>(t), schedule.p));
    case AlphaKind::LogDecay:
      return clamp01(schedule.a0 / std::log(static_cast<double>(t) + 1.0));
    case AlphaKind::Adaptive: {
      const double r = *r_prev;
      double g;
      if (schedule.form == AdaptiveForm::Reciprocal) {
        g = r > 0.0 ? std::min(1.0, 1.0 / (schedule.lambda * r)) : 1.0;
      } else {
        g = std::exp(-schedule.lambda * r);
      }
      // Smallest alpha with (1-alpha)^2 <= g.
      return clamp01(1.0 - std::sqrt(g));
    }
    case AlphaKind::Explicit: {
      const std::size_t idx = static_cast<std::size_t>(t - 1);
      if (idx >= schedule.values.size()) {
        throw std::out_of_range("explicit alpha schedule has no value for t=" + std::to_string(t));
      }
      return schedule.values[idx];
    }
    case AlphaKind::Zero:
      return 0.0;
  }
  throw std::logic_error("unhandled alpha kind");
}

SampleSizeSchedule SampleSizeSchedule::constant(long long n) {
  if (n < 1) throw std::invalid_argument("constant sample size must be >= 1");
  SampleSizeSchedule s;
  s.kind = SizeKind::Constant;
  s.n = n;
  return s;
}

SampleSizeSchedule SampleSizeSchedule::polynomial(long long n0, double degree) {
  if (n0 < 1) throw std::invalid_argument("polynomial sample size needs n0 >= 1");
  if (!(degree >= 0.0)) throw std::invalid_argument("polynomial degree must be >= 0");
  SampleSizeSchedule s;
  s.kind = SizeKind::Polynomial;
  s.n0 = n0;
  s.degree = degree;
  return s;
}

SampleSizeSchedule SampleSizeSchedule::improvement_recursive(long long n0) {
  if (n0 < 1) throw std::invalid_argument("improvement-recursive needs n0 >= 1");
  SampleSizeSchedule s;
  s.kind = SizeKind::ImprovementRecursive;
  s.n0 = n0;
  return s;
}

SampleSizeSchedule SampleSizeSchedule::explicit_values(std::vector<long long> values) {
  for (long long v : values) {
    if (v < 1) throw std::invalid_argument("explicit sample sizes must be >= 1");
  }
  SampleSizeSchedule s;
  s.kind = SizeKind::Explicit;
  s.values = std::move(values);
  return s;
}

std::string SampleSizeSchedule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case SizeKind::Constant: os << "constant(" << n << ")"; break;
    case SizeKind::Polynomial: os << "polynomial(" << n0 << ", d=" << degree << ")"; break;
    case SizeKind::ImprovementRecursive: os << "improvement-recursive(" << n0 << ")"; break;
    case SizeKind::Explicit: os << "explicit[" << values.size() << "]"; break;
  }
  return os.str();
}

double improvement_min_sample_real(double n_prev, double alpha_t) {
  if (!(n_prev >= 1.0)) throw std::invalid_argument("n_prev must be >= 1");
  if (!(alpha_t > 0.0 && alpha_t <= 1.0)) {
    throw std::domain_error("improvement_min_sample needs alpha_t in (0, 1]");
  }
  const double xi = alpha_t * (2.0 - alpha_t);
  const double x = (n_prev - 1.0) / xi;
  // Smallest integer n with n - 1 > x. When x itself is an integer the
  // ceiling alone only reaches equality, which keeps the risk flat instead
  // of decreasing it, so step one past it.
  const double xr = std::round(x);
  if (std::abs(x - xr) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return xr + 2.0;
  }
  return std::ceil(x) + 1.0;
}

long long improvement_min_sample(long long n_prev, double alpha_t) {
  const double result = improvement_min_sample_real(static_cast<double>(n_prev), alpha_t);
  if (result > 9.0e18) {
    throw std::overflow_error("improving sample size exceeds 64-bit range; use the planning API");
  }
  return static_cast<long long>(result);
}

long long n_at(const SampleSizeSchedule& schedule, long long t,
               std::optional<long long> n_prev, std::optional<double> alpha_t) {
  if (t < 0) throw std::invalid_argument("n_t is defined for t >= 0");
  switch (schedule.kind) {
    case SizeKind::Constant:
      return schedule.n;
    case SizeKind::Polynomial: {
      if (t == 0) return schedule.n0;
      const double d = schedule.degree;
      double value;
      if (d == std::floor(d) && d <= 62.0) {
        double powed = 1.0;
        for (long long i = 0; i < static_cast<long long>(d); ++i) {
          powed *= static_cast<double>(t);
        }
        value = static_cast<double>(schedule.n0) * powed;
      } else {
        value = static_cast<double>(schedule.n0) * std::pow(static_cast<double>(t), d);
      }
      if (value > 9.0e18) throw std::overflow_error("polynomial sample size overflows");
      return std::max<long long>(1, std::llround(value));
    }
    case SizeKind::ImprovementRecursive: {
      if (t == 0) return schedule.n0;
      if (!n_prev.has_value() || !alpha_t.has_value()) {
        throw std::invalid_argument(
            "improvement-recursive sizes need n_prev and alpha_t for t >= 1");
      }
      if (*n_prev < 1) throw std::invalid_argument("n_prev must be >= 1");
      if (*alpha_t == 0.0) {
        throw std::domain_error("no finite improving sample size exists for alpha_t = 0");
      }
      return improvement_min_sample(*n_prev, *alpha_t);
    }
    case SizeKind::Explicit: {
      const std::size_t idx = static_cast<std::size_t>(t);
      if (idx >= schedule.values.size()) {
        throw std::out_of_range("explicit size schedule has no value for t=" + std::to_string(t));
      }
      return schedule.values[idx];
    }
  }
  throw std::logic_error("unhandled size kind");
}

ConsistencyReport consistency_diagnostic(const AlphaSchedule& alpha,
                                         const SampleSizeSchedule& n, long long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");

  ConsistencyReport report;
  report.note =
      "finite-horizon heuristic only: divergence/convergence of the series "
      "cannot be decided numerically";

  const long long half = horizon / 2;
  double alpha_sum_half = 0.0;
  double invn_sum_half = 0.0;
  bool alpha_evaluable = !alpha.is_adaptive();
  bool n_evaluable = true;

  long long n_prev = 0;
  for (long long t = 1; t <= horizon; ++t) {
    double a = 0.0;
    if (alpha_evaluable) {
      try {
        a = alpha_at(alpha, t);
        report.partial_sum_alpha += a;
      } catch (const std::exception&) {
        alpha_evaluable = false;  // e.g. explicit schedule shorter than horizon
      }
    }
    if (n_evaluable) {
      try {
        long long nt;
        if (n.is_recursive()) {
          const long long prev = (t == 1) ? n_at(n, 0) : n_prev;
          nt = n_at(n, t, prev, alpha_evaluable ? std::optional<double>(a) : std::nullopt);
        } else {
          nt = n_at(n, t);
        }
        n_prev = nt;
        report.partial_sum_inv_n += 1.0 / static_cast<double>(nt);
      } catch (const std::exception&) {
        n_evaluable = false;
      }
    }
    if (t == half) {
      alpha_sum_half = report.partial_sum_alpha;
      invn_sum_half = report.partial_sum_inv_n;
    }
  }

  if (!alpha_evaluable) {
    report.note += "; alpha schedule not evaluable over the full horizon, verdict inconclusive";
  }
  if (!n_evaluable) {
    report.note += "; size schedule not evaluable over the full horizon, verdict inconclusive";
  }

  // Heuristic: the alpha partial sum still grows materially over the second
  // half of the horizon (divergent-looking) while the 1/n partial sum has
  // nearly stopped growing (convergent-looking).
  if (alpha_evaluable && n_evaluable && horizon >= 4) {
    const double alpha_growth = report.partial_sum_alpha - alpha_sum_half;
    const double invn_growth = report.partial_sum_inv_n - invn_sum_half;
    const bool alpha_divergent_like =
        report.partial_sum_alpha > 0.0 && alpha_growth >= 0.05 * std::max(alpha_sum_half, 1e-300);
    const bool invn_convergent_like =
        invn_sum_half > 0.0 && invn_growth <= 0.05 * invn_sum_half;
    report.condition_met_so_far = alpha_divergent_like && invn_convergent_like;
  }
  return report;
}

}  // namespace collapselab
