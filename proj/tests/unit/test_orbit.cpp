#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rovella/errors.hpp"
#include "rovella/fit.hpp"
#include "rovella/orbit.hpp"

using namespace rovella;

TEST(Constants, DerivedDefaults) {
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  EXPECT_DOUBLE_EQ(k.beta, 1.5 * 0.05);
  EXPECT_EQ(k.theta, 5);
  EXPECT_DOUBLE_EQ(k.epsilon_rec, 0.1);
  // log(1.2)/2.5 - 0.075 - 0.075 is negative, so the floor applies.
  EXPECT_DOUBLE_EQ(k.c_exp, AnalysisConstants::kCExpFloor);
  EXPECT_EQ(k.distortion_depth(), static_cast<int>(std::ceil(0.075 * 3.5 * 5 / (0.075 + std::log(1.2)))));
}

TEST(Constants, ValidationRejectsBadValues) {
  ConstantsSpec spec;
  spec.lambda_c = 0.9;
  EXPECT_THROW(resolve_constants(spec, 1.5), InvalidParams);
  spec = {};
  spec.delta_big = 0;
  EXPECT_THROW(resolve_constants(spec, 1.5), InvalidParams);
  spec = {};
  spec.theta = 4;
  EXPECT_THROW(resolve_constants(spec, 1.5), InvalidParams);
  spec = {};
  spec.delta_big = 1;
  EXPECT_EQ(resolve_constants(spec, 1.5).theta, 1);
}

TEST(Fit, LineIsExactOnLinearData) {
  const std::vector<double> x{0, 1, 2, 3, 4};
  const std::vector<double> y{1, 3, 5, 7, 9};
  const LinearFit f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
  const std::vector<double> same{2, 2, 2};
  EXPECT_THROW(fit_line(same, same), DegenerateFit);
}

TEST(Fit, ExponentialRecoversRate) {
  std::vector<double> x, y;
  for (int n = 0; n < 20; ++n) {
    x.push_back(n);
    y.push_back(3.0 * std::exp(-0.25 * n));
  }
  y.push_back(0.0);
  x.push_back(25);
  const ExponentialFit f = fit_exponential(x, y);
  EXPECT_NEAR(f.tau, 0.25, 1e-12);
  EXPECT_NEAR(f.c, 3.0, 1e-11);
  EXPECT_EQ(f.points, 20);
  EXPECT_THROW(fit_exponential(std::vector<double>{1, 2}, std::vector<double>{1, 0.5}), DegenerateFit);
}

TEST(Orbit, IterateAndSingularity) {
  const MapParams p(0.0, 2.0);
  const auto orbit = iterate(p, 0.5, 3);
  ASSERT_EQ(orbit.size(), 4u);
  EXPECT_DOUBLE_EQ(orbit[1], -0.5);
  EXPECT_DOUBLE_EQ(orbit[2], 0.5);
  EXPECT_THROW(iterate(p, 0.0, 2), SingularityHit);
}

TEST(Orbit, TruncatedDistance) {
  EXPECT_DOUBLE_EQ(truncated_distance(0.001, 0.0, 0.01), 0.001);
  EXPECT_DOUBLE_EQ(truncated_distance(0.5, 0.0, 0.01), 1.0);
  EXPECT_DOUBLE_EQ(truncated_distance(-0.01, 0.0, 0.01), 0.01);
}

TEST(Orbit, TimeFunctionsMatchNaiveOracle) {
  const MapParams p(0.14);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  SampleStream rng(7, 0);
  for (int i = 0; i < 40; ++i) {
    const double x = rng.uniform_symmetric();
    const int n_max = 80;
    const StabilizationTimes t = stabilization_times(p, x, k, n_max);
    EXPECT_EQ(t.expansion, oracle::naive_expansion_time(p, x, k, n_max)) << "x=" << x;
    EXPECT_EQ(t.recurrence, oracle::naive_recurrence_time(p, x, k, n_max)) << "x=" << x;
    EXPECT_EQ(expansion_time(p, x, k, n_max), t.expansion);
    EXPECT_EQ(recurrence_time(p, x, k, n_max), t.recurrence);
  }
}

TEST(Orbit, FixedPointTimes) {
  // a = 0: +1 is fixed with log f'(1) = log(cs) > c_exp, and it never nears 0.
  const MapParams p(0.0, 1.5);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  EXPECT_EQ(expansion_time(p, 1.0, k, 100), 1);
  EXPECT_EQ(recurrence_time(p, 1.0, k, 100), 1);
}

TEST(Orbit, FixedPointTimesAtChebyshevParameter) {
  const MapParams p(0.0, 2.0);
  AnalysisConstants k = AnalysisConstants::defaults(2.0);
  k.c_exp = 0.5;
  EXPECT_EQ(expansion_time(p, 1.0, k, 100), 1);
  EXPECT_EQ(recurrence_time(p, 1.0, k, 100), 1);
}

TEST(Orbit, SingleDeepEntryRecoversAfterDepthOverEpsilon) {
  // f(e^-20) rounds to the fixed point -1 at a = 0, s = 2, so the orbit makes one deep
  // entry at time 0 and never returns.
  const MapParams p(0.0, 2.0);
  const AnalysisConstants k = AnalysisConstants::defaults(2.0);
  const double x = std::exp(-20.0);
  ASSERT_EQ(eval(p, x), -1.0);
  const double d = -std::log(x);
  int expected = 1;
  while (!(d / expected < k.epsilon_rec)) ++expected;
  EXPECT_EQ(expected, static_cast<int>(std::ceil(d / k.epsilon_rec)) + 1);
  EXPECT_EQ(recurrence_time(p, x, k, 1000), expected);
}

TEST(Orbit, ExceedsHorizonWhenPropertyFailsAtEnd) {
  AnalysisConstants k = AnalysisConstants::defaults(1.5);
  k.c_exp = 10.0;
  EXPECT_FALSE(expansion_time(MapParams(0.1), 0.3, k, 50).has_value());
}

TEST(Orbit, GeometricLadder) {
  const auto l = geometric_ladder(10);
  EXPECT_EQ(l, (std::vector<int>{1, 2, 3, 4, 5, 6, 8, 10}));
  const auto big = geometric_ladder(500);
  EXPECT_EQ(big.back(), 500);
  for (std::size_t i = 1; i < big.size(); ++i) EXPECT_GT(big[i], big[i - 1]);
}

TEST(TailCurve, PreconditionsAndShape) {
  const MapParams p(0.14);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  EXPECT_THROW(tail_curve(p, k, 999, 100, 1), std::invalid_argument);
  EXPECT_THROW(tail_curve(p, k, 1000, 49, 1), std::invalid_argument);
  const TailCurve t = tail_curve(p, k, 2000, 200, 3);
  ASSERT_EQ(t.n_values.size(), t.gamma_fraction.size());
  for (std::size_t i = 1; i < t.gamma_fraction.size(); ++i) {
    EXPECT_LE(t.gamma_fraction[i], t.gamma_fraction[i - 1]);
    EXPECT_GE(t.gamma_fraction[i], 0.0);
  }
  EXPECT_GT(t.fitted_tau, 0.0);
}

TEST(TailCurve, DecaysAtChebyshevParameter) {
  const MapParams p(0.0, 2.0);
  const TailCurve t = tail_curve(p, AnalysisConstants::defaults(2.0), 5000, 200, 2);
  EXPECT_GT(t.fitted_tau, 0.0);
  EXPECT_LT(t.gamma_fraction.back(), t.gamma_fraction.front());
}

TEST(TailCurve, DoublingSampleAgreesWithinBinomialError) {
  const MapParams p(0.14);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  const TailCurve a = tail_curve(p, k, 5000, 200, 4);
  const TailCurve b = tail_curve(p, k, 10000, 200, 4);
  ASSERT_EQ(a.n_values, b.n_values);
  for (std::size_t i = 0; i < a.n_values.size(); ++i) {
    const double q = b.gamma_fraction[i];
    const double se = std::sqrt(q * (1 - q) / 5000.0);
    EXPECT_LE(std::fabs(a.gamma_fraction[i] - q), 3 * se + 1e-12) << "n=" << a.n_values[i];
  }
}

TEST(TailCurve, WorkerCountDoesNotChangeResult) {
  const MapParams p(0.14);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  const TailCurve a = tail_curve(p, k, 3000, 100, 11, Execution{1});
  const TailCurve b = tail_curve(p, k, 3000, 100, 11, Execution{4});
  EXPECT_EQ(a.gamma_count, b.gamma_count);
  EXPECT_EQ(a.fitted_tau, b.fitted_tau);
  EXPECT_EQ(a.redraws, b.redraws);
}

TEST(DeepApproach, SingleStepClosedForm) {
  // |f(x)| <= r  <=>  x^s in [(1-r)/c, (1+r)/c] on each side.
  const MapParams p(0.1, 1.5);
  const double alpha = 0.5;
  const double r = std::exp(-alpha);
  const double c = p.coeff();
  const double lo = std::pow((1 - r) / c, 1 / p.s());
  const double hi = std::min(1.0, std::pow((1 + r) / c, 1 / p.s()));
  const double exact = hi - lo;
  const int n = 100'000;
  const double est = deep_approach_fraction(p, n, 1, alpha, 5);
  EXPECT_NEAR(est, exact, 4.0 * std::sqrt(exact * (1 - exact) / n));
}

TEST(DeepApproach, UnderflowGivesZero) {
  EXPECT_EQ(deep_approach_fraction(MapParams(0.1), 1000, 20000, 0.05, 1), 0.0);
}
