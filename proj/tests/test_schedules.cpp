#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "collapselab/analytic.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/schedules.hpp"

using namespace collapselab;

TEST_CASE("alpha_at evaluates the decay families") {
  CHECK(alpha_at(AlphaSchedule::constant(0.1), 7) == doctest::Approx(0.1));
  CHECK(alpha_at(AlphaSchedule::power_decay(0.5, 0.5), 4) == doctest::Approx(0.25));
  CHECK(alpha_at(AlphaSchedule::power_decay(0.5, 1.0), 1) == 0.5);  // exactly a0 at t=1
  CHECK(alpha_at(AlphaSchedule::zero(), 3) == 0.0);
  CHECK(alpha_at(AlphaSchedule::log_decay(0.5), 9) == doctest::Approx(0.5 / std::log(10.0)));
  // log-decay exceeds 1 at small t for large a0; values clamp into [0, 1].
  CHECK(alpha_at(AlphaSchedule::log_decay(1.0), 1) == 1.0);
}

TEST_CASE("adaptive alpha solves the binding constraint") {
  const auto recip = AlphaSchedule::adaptive(4.0, AdaptiveForm::Reciprocal);
  CHECK(alpha_at(recip, 1, 1.0) == doctest::Approx(0.5));  // 1 - sqrt(1/4)
  CHECK(alpha_at(recip, 1, 0.0) == 0.0);                   // no risk, no fresh data needed
  // Small risk: 1/(lambda r) >= 1, so the constraint is slack and alpha = 0.
  CHECK(alpha_at(recip, 1, 0.01) == 0.0);

  const auto expo = AlphaSchedule::adaptive(2.0, AdaptiveForm::Exponential);
  const double a = alpha_at(expo, 1, 0.3);
  CHECK((1.0 - a) * (1.0 - a) == doctest::Approx(std::exp(-2.0 * 0.3)).epsilon(1e-12));

  CHECK_THROWS_AS(alpha_at(recip, 1), std::invalid_argument);          // missing r_prev
  CHECK_THROWS_AS(alpha_at(AlphaSchedule::constant(0.1), 1, 0.5),
                  std::invalid_argument);                              // r_prev without adaptive
}

TEST_CASE("adaptive alpha satisfies its constraint with near-equality") {
  RngStream rng(99);
  const auto forms = {AdaptiveForm::Reciprocal, AdaptiveForm::Exponential};
  for (const auto form : forms) {
    for (int i = 0; i < 200; ++i) {
      const double lambda = 1.0 + 9.0 * rng.uniform();
      const double r = 2.0 * rng.uniform();
      const auto sched = AlphaSchedule::adaptive(lambda, form);
      const double a = alpha_at(sched, 1, r);
      const double g = form == AdaptiveForm::Reciprocal
                           ? (r > 0 ? std::min(1.0, 1.0 / (lambda * r)) : 1.0)
                           : std::exp(-lambda * r);
      const double sq = (1.0 - a) * (1.0 - a);
      CHECK(sq <= g * (1.0 + 1e-12));
      CHECK(sq >= g * (1.0 - 1e-12));  // smallest alpha means the constraint binds
    }
  }
}

TEST_CASE("explicit schedules are range checked") {
  const auto alpha = AlphaSchedule::explicit_values({0.5, 0.25});
  CHECK(alpha_at(alpha, 1) == 0.5);
  CHECK(alpha_at(alpha, 2) == 0.25);
  CHECK_THROWS_AS(alpha_at(alpha, 3), std::out_of_range);

  const auto sizes = SampleSizeSchedule::explicit_values({5, 7});
  CHECK(n_at(sizes, 0) == 5);
  CHECK(n_at(sizes, 1) == 7);
  CHECK_THROWS_AS(n_at(sizes, 2), std::out_of_range);
}

TEST_CASE("n_at evaluates the growth families") {
  CHECK(n_at(SampleSizeSchedule::polynomial(10, 2.0), 3) == 90);
  CHECK(n_at(SampleSizeSchedule::polynomial(10, 2.0), 0) == 10);
  CHECK(n_at(SampleSizeSchedule::constant(5), 100) == 5);
  CHECK(n_at(SampleSizeSchedule::improvement_recursive(11), 0) == 11);
  CHECK(n_at(SampleSizeSchedule::improvement_recursive(11), 1, 11, 0.5) == 15);
  CHECK_THROWS_AS(n_at(SampleSizeSchedule::improvement_recursive(11), 1, 11, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(n_at(SampleSizeSchedule::improvement_recursive(11), 1), std::invalid_argument);
}

TEST_CASE("schedule parameter validation") {
  CHECK_THROWS_AS(AlphaSchedule::power_decay(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSchedule::power_decay(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSchedule::constant(1.5), std::invalid_argument);
  CHECK_THROWS_AS(SampleSizeSchedule::constant(0), std::invalid_argument);
  CHECK_THROWS_AS(SampleSizeSchedule::explicit_values({3, 0}), std::invalid_argument);
}

TEST_CASE("improvement_min_sample matches hand-computed values") {
  // xi = alpha(2 - alpha); smallest n with xi*(n-1) strictly above n_prev-1.
  CHECK(improvement_min_sample(11, 0.5) == 15);    // (11-1)/0.75 = 13.33 -> 15
  CHECK(improvement_min_sample(101, 0.1) == 528);  // 100/0.19 = 526.3 -> 528
  // Integral boundary: (2-1)/1 = 1; n = 2 only reaches equality in the
  // recurrence, so the minimal strictly-improving size is 3.
  CHECK(improvement_min_sample(2, 1.0) == 3);
  CHECK_THROWS_AS(improvement_min_sample(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(improvement_min_sample(2, -0.5), std::domain_error);
}

TEST_CASE("improvement_min_sample is monotone in both arguments") {
  RngStream rng(17);
  for (int i = 0; i < 400; ++i) {
    const long long n_prev = 1 + static_cast<long long>(rng.uniform() * 500);
    const double a = 0.01 + 0.99 * rng.uniform();
    const double a_bigger = a + (1.0 - a) * rng.uniform();
    CHECK(improvement_min_sample(n_prev, a_bigger) <= improvement_min_sample(n_prev, a));
    CHECK(improvement_min_sample(n_prev + 1, a) >= improvement_min_sample(n_prev, a));
  }
}

TEST_CASE("improvement sizes force strict decay of the risk recurrence") {
  // Any starting risk at or above the recurrence floor n0*R0/n_prev must
  // strictly decrease after one round at the minimal improving size.
  RngStream rng(2024);
  for (int i = 0; i < 500; ++i) {
    const long long n0 = 2 + static_cast<long long>(rng.uniform() * 50);
    const long long n_prev = n0 + static_cast<long long>(rng.uniform() * 100);
    const double a = 0.02 + 0.98 * rng.uniform();
    const double r0 = 0.01 + rng.uniform();
    const double floor_risk = static_cast<double>(n0) * r0 / static_cast<double>(n_prev);
    const double r_prev = floor_risk * (1.0 + rng.uniform());
    const long long nt = improvement_min_sample(n_prev, a);
    const double r_next =
        risk_step(r_prev, r0, static_cast<double>(n0), static_cast<double>(nt), a);
    CHECK(r_next < r_prev);
  }
}

TEST_CASE("schedule invariants hold over randomized parameters") {
  RngStream rng(5);
  for (int i = 0; i < 300; ++i) {
    const double a0 = 0.01 + 0.99 * rng.uniform();
    const double p = 2.0 * rng.uniform();
    const long long t = 1 + static_cast<long long>(rng.uniform() * 1000);
    for (const auto& sched : {AlphaSchedule::constant(a0), AlphaSchedule::power_decay(a0, p),
                              AlphaSchedule::log_decay(a0), AlphaSchedule::zero()}) {
      const double a = alpha_at(sched, t);
      CHECK(a >= 0.0);
      CHECK(a <= 1.0);
    }
    const long long c = 1 + static_cast<long long>(rng.uniform() * 100);
    const double d = 3.0 * rng.uniform();
    CHECK(n_at(SampleSizeSchedule::constant(c), t) >= 1);
    CHECK(n_at(SampleSizeSchedule::polynomial(c, d), t) >= 1);
    // Polynomial growth is nondecreasing for d >= 0.
    CHECK(n_at(SampleSizeSchedule::polynomial(c, d), t + 1) >=
          n_at(SampleSizeSchedule::polynomial(c, d), t));
  }
}

TEST_CASE("consistency diagnostic reports partial sums and a labeled verdict") {
  // Oracle values from direct partial-sum evaluation.
  double sum_alpha = 0.0, sum_inv_n = 0.0;
  for (int t = 1; t <= 100; ++t) {
    sum_alpha += 0.5 / std::sqrt(static_cast<double>(t));
    sum_inv_n += 1.0 / (10.0 * t * t);
  }
  const auto report = consistency_diagnostic(AlphaSchedule::power_decay(0.5, 0.5),
                                             SampleSizeSchedule::polynomial(10, 2.0), 100);
  CHECK(report.partial_sum_alpha == doctest::Approx(sum_alpha).epsilon(1e-12));
  CHECK(report.partial_sum_alpha == doctest::Approx(9.294801912392074).epsilon(1e-12));
  CHECK(report.partial_sum_inv_n == doctest::Approx(sum_inv_n).epsilon(1e-12));
  CHECK(report.partial_sum_inv_n == doctest::Approx(0.16349839001848931).epsilon(1e-12));
  CHECK(report.condition_met_so_far);
  CHECK(report.note.find("finite-horizon") != std::string::npos);

  const auto zero_report =
      consistency_diagnostic(AlphaSchedule::zero(), SampleSizeSchedule::constant(5), 50);
  CHECK(zero_report.partial_sum_alpha == 0.0);
  CHECK_FALSE(zero_report.condition_met_so_far);

  const auto flat = consistency_diagnostic(AlphaSchedule::constant(0.3),
                                           SampleSizeSchedule::constant(5), 10);
  CHECK(flat.partial_sum_alpha == doctest::Approx(3.0));
  CHECK(flat.partial_sum_inv_n == doctest::Approx(2.0));
  CHECK_FALSE(flat.condition_met_so_far);  // 1/n partial sum keeps growing
}
