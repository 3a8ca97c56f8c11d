#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace collapselab {

enum class AlphaKind { Constant, PowerDecay, LogDecay, Adaptive, Explicit, Zero };
enum class AdaptiveForm { Reciprocal, Exponential };

// Mixture-weight sequence alpha_t for rounds t >= 1 (round 0 is always pure
// real data). All evaluated weights lie in [0, 1].
struct AlphaSchedule {
  AlphaKind kind = AlphaKind::Zero;
  double a0 = 0.0;        // constant / power-decay / log-decay
  double p = 1.0;         // power-decay exponent, a0 / t^p
  double lambda = 0.0;    // adaptive gain
  AdaptiveForm form = AdaptiveForm::Reciprocal;
  std::vector<double> values;  // explicit

  static AlphaSchedule constant(double a0);
  static AlphaSchedule power_decay(double a0, double p);
  static AlphaSchedule log_decay(double a0);
  static AlphaSchedule adaptive(double lambda, AdaptiveForm form);
  static AlphaSchedule explicit_values(std::vector<double> values);
  static AlphaSchedule zero();

  bool is_adaptive() const { return kind == AlphaKind::Adaptive; }
  bool is_zero() const { return kind == AlphaKind::Zero; }
  std::string describe() const;
};

// Evaluates alpha_t for t >= 1. Adaptive schedules require r_prev (the
// analytic risk of the previous round) and return the smallest alpha with
// (1-alpha)^2 <= g_lambda(r_prev), where g is min{1, 1/(lambda*r)} for the
// reciprocal form and exp(-lambda*r) for the exponential form.
double alpha_at(const AlphaSchedule& schedule, long long t,
                std::optional<double> r_prev = std::nullopt);

enum class SizeKind { Constant, Polynomial, ImprovementRecursive, Explicit };

// Sample-size sequence n_t for rounds t >= 0. Every evaluated size is an
// integer >= 1. Polynomial means n0 * t^degree for t >= 1 and n0 at t = 0.
struct SampleSizeSchedule {
  SizeKind kind = SizeKind::Constant;
  long long n = 1;        // constant
  long long n0 = 1;       // polynomial / improvement-recursive
  double degree = 1.0;    // polynomial
  std::vector<long long> values;  // explicit, indexed by t from 0

  static SampleSizeSchedule constant(long long n);
  static SampleSizeSchedule polynomial(long long n0, double degree);
  static SampleSizeSchedule improvement_recursive(long long n0);
  static SampleSizeSchedule explicit_values(std::vector<long long> values);

  bool is_recursive() const { return kind == SizeKind::ImprovementRecursive; }
  std::string describe() const;
};

// Evaluates n_t. The improvement-recursive kind needs the previous size and
// the current mixture weight; alpha_t = 0 has no finite improving size.
long long n_at(const SampleSizeSchedule& schedule, long long t,
               std::optional<long long> n_prev = std::nullopt,
               std::optional<double> alpha_t = std::nullopt);

// Smallest sample size n with alpha_t(2-alpha_t) * (n-1) > n_prev - 1, the
// minimal size for which the round-t risk strictly improves on round t-1
// whenever R_{t-1} >= n0*R0/n_{t-1}.
long long improvement_min_sample(long long n_prev, double alpha_t);

// Same computation in floating point, for planning chains whose sizes
// overflow 64-bit integers (they grow roughly by a factor t/2 per round
// under alpha_t ~ 1/t).
double improvement_min_sample_real(double n_prev, double alpha_t);

struct ConsistencyReport {
  double partial_sum_alpha = 0.0;
  double partial_sum_inv_n = 0.0;
  bool condition_met_so_far = false;  // heuristic verdict, see note
  std::string note;
};

// Partial sums of alpha_t and 1/n_t up to the horizon, with a heuristic
// verdict on the consistency condition (sum alpha_t divergent and
// sum 1/n_t convergent). Divergence cannot be decided from a finite
// horizon; the note says so and the verdict never claims divergence.
ConsistencyReport consistency_diagnostic(const AlphaSchedule& alpha,
                                         const SampleSizeSchedule& n,
                                         long long horizon);

}  // namespace collapselab
