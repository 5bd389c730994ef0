#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "datalimit/closed_form.hpp"
#include "datalimit/numerics.hpp"
#include "datalimit/quadrature.hpp"

namespace datalimit {
namespace {

LinkBudget with_snr(double s, double alpha = 2.0) {
  LinkBudget b = LinkBudget{}.with_transmit_snr(s);
  b.path_loss_exp = alpha;
  return b;
}

const MobilityProfile kOneDim{1.0, 0.0, 5.0};

TEST(AdaptiveCore, PolynomialsAndSmoothFunctionsAreExact) {
  const QuadratureSpec spec;
  auto cubic = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  const auto r = detail::integrate_adaptive(cubic, {0.0, 2.0}, spec);
  EXPECT_NEAR(r.value, 12.0 - 2.0 + 4.0, 1e-13);
  EXPECT_TRUE(r.converged);

  auto bump = [](double x) { return std::exp(-x * x); };
  const auto g = detail::integrate_adaptive(bump, {-8.0, 0.0, 8.0}, spec);
  EXPECT_NEAR(g.value, std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_GE(g.error_estimate, std::abs(g.value - std::sqrt(std::numbers::pi)));
}

TEST(AdaptiveCore, ReportsNonConvergence) {
  QuadratureSpec spec;
  spec.max_subdivisions = 2;
  spec.rel_tol = 1e-15;
  spec.abs_tol = 1e-300;
  auto spiky = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3) + 1e-12); };
  const auto r = detail::integrate_adaptive(spiky, {0.0, 1.0}, spec);
  EXPECT_FALSE(r.converged);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_THROW(require_converged(r), ConvergenceError);
}

TEST(IntegrateFinite, EmptyIntervalAndClosedForm) {
  EXPECT_EQ(integrate_finite(LinkBudget{}, kOneDim, 0.0).value, 0.0);
  const auto r = integrate_finite(LinkBudget{}, kOneDim, 3600.0);
  EXPECT_TRUE(r.converged);
  const double closed = d_t_closed_alpha2(LinkBudget{}, kOneDim, 3600.0).nats();
  EXPECT_LE(relative_difference(r.value, closed), 1e-8);
  EXPECT_GE(r.error_estimate * 10.0 + 1e-6 * closed, std::abs(r.value - closed));
  EXPECT_THROW(integrate_finite(LinkBudget{}, kOneDim, -1.0), DomainError);
}

TEST(IntegrateFinite, BelowConstantRateCeiling) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const LinkBudget b = with_snr(std::pow(10.0, 8.0 * u(rng)), 2.0 + 3.0 * u(rng));
    const MobilityProfile p{1.0 + 5.0 * u(rng), 20.0 * u(rng), 0.5 + 20.0 * u(rng)};
    const double t = 1e4 * u(rng);
    EXPECT_LE(integrate_finite(b, p, t).value, b.bandwidth_hz * t * std::log1p(b.transmit_snr()));
  }
}

TEST(IntegrateFinite, AdditiveMonotoneAndMatchesPositionRoute) {
  const LinkBudget b = with_snr(1e6, 3.0);
  const MobilityProfile p{2.0, 7.0, 4.0};
  const Scenario sc(b, p);
  double prev = 0.0;
  for (double t1 : {0.5, 10.0, 200.0, 5000.0}) {
    const double t2 = 3.0 * t1;
    const auto a = integrate_finite(b, p, t1);
    const auto whole = integrate_finite(b, p, t2);
    const auto rest = integrate_over_position(sc, p.x0_m + p.speed_mps * t1, p.x0_m + p.speed_mps * t2);
    EXPECT_NEAR(a.value + rest.value, whole.value,
                a.error_estimate + rest.error_estimate + whole.error_estimate + 1e-12 * whole.value);
    const auto by_position = integrate_over_position(sc, p.x0_m, p.x0_m + p.speed_mps * t1);
    EXPECT_LE(relative_difference(by_position.value, a.value), 1e-9);
    EXPECT_GE(a.value, prev);
    prev = a.value;
  }
}

TEST(TailBound, PowerLawAndValue) {
  const LinkBudget b;
  EXPECT_NEAR(tail_bound(b, kOneDim, 1e8), 2e4, 1e-9);
  EXPECT_NEAR(tail_bound(b, kOneDim, 2e8), 1e4, 1e-9);
  LinkBudget b3 = b;
  b3.path_loss_exp = 3.0;
  EXPECT_NEAR(tail_bound(b3, kOneDim, 20.0), 0.25 * tail_bound(b3, kOneDim, 10.0), 1e-6);
  EXPECT_THROW(tail_bound(b, kOneDim, 0.5), DomainError);
}

TEST(TailBound, DominatesActualRemainder) {
  for (double alpha : {2.0, 2.5, 4.0})
    for (double z0 : {0.0, 30.0}) {
      const LinkBudget b = with_snr(1e7, alpha);
      const MobilityProfile p{1.0, z0, 5.0};
      const Scenario sc(b, p);
      for (double x : {10.0, 1e3, 1e5}) {
        const double bound = tail_bound(b, p, x);
        const double piece = integrate_over_position(sc, x, 1e3 * x).value;
        EXPECT_GE(bound, piece) << alpha << ' ' << z0 << ' ' << x;
      }
    }
}

TEST(IntegrateInfinite, MatchesClosedForms) {
  const auto r = integrate_infinite(LinkBudget{}, kOneDim);
  ASSERT_TRUE(r.converged);
  const double closed = d_inf_3(LinkBudget{}, 5.0).nats();
  EXPECT_LE(relative_difference(r.value, closed), 1e-8);
  EXPECT_GE(r.error_estimate + 1e-10 * closed, std::abs(r.value - closed));
  EXPECT_GT(r.truncation_point, 1e9);

  const MobilityProfile offset{1.0, 100.0, 5.0};
  EXPECT_LE(relative_difference(integrate_infinite(LinkBudget{}, offset).value,
                                d_inf_2(LinkBudget{}, offset).nats()),
            1e-8);
}

TEST(IntegrateInfinite, GeneralAlphaWithOffsetHasCertifiedErrorBars) {
  const LinkBudget b = with_snr(1e8, 3.0);
  const MobilityProfile p{1.0, 50.0, 5.0};
  const auto r = integrate_infinite(b, p);
  ASSERT_TRUE(r.converged);
  // 30-digit reference: 29026175.8419449877...
  EXPECT_NEAR(r.value, 29026175.8419449877, r.error_estimate + 1e-9 * r.value);
  EXPECT_LE(r.error_estimate, 2e-9 * r.value);
  EXPECT_GT(r.error_estimate, 0.0);
}

TEST(IntegrateInfinite, DominatesFiniteHorizons) {
  const LinkBudget b = with_snr(1e4, 2.5);
  const MobilityProfile p{3.0, 2.0, 10.0};
  const double total = integrate_infinite(b, p).value;
  for (double t : {1.0, 100.0, 1e4, 1e7})
    EXPECT_LE(integrate_finite(b, p, t).value, total * (1.0 + 1e-10));
}

TEST(IntegrateInfinite, AtSOneMatchesLimitOfSeries) {
  // C(1, 2) = pi/2 - ln 2 from the atan identity; B d0 / v = 1e5 at v = 1.
  const auto r = integrate_infinite(with_snr(1.0), {1.0, 0.0, 1.0});
  EXPECT_NEAR(r.value, 1e5 * (std::numbers::pi / 2.0 - std::log(2.0)), 1e-8 * r.value);
}

TEST(IntegrateInfinite, Deterministic) {
  const LinkBudget b = with_snr(3e6, 2.7);
  const MobilityProfile p{1.5, 4.0, 9.0};
  const auto a = integrate_infinite(b, p);
  const auto c = integrate_infinite(b, p);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.error_estimate, c.error_estimate);
}

}  // namespace
}  // namespace datalimit
