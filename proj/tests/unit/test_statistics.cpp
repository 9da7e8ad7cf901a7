#include <gtest/gtest.h>

#include <cmath>

#include "rovella/errors.hpp"
#include "rovella/statistics.hpp"

using namespace rovella;

namespace {

const MapParams kParams(0.14);

EnsembleOptions small_ensemble() {
  EnsembleOptions o;
  o.sample_size = 40;
  o.burn_in = 200;
  o.length = 4000;
  o.seed = 5;
  return o;
}

}  // namespace

TEST(Observables, CatalogResolves) {
  for (const auto& name : observable_catalog()) {
    const Observable o = make_observable(name, kParams);
    EXPECT_EQ(o.name, name);
    for (double x : {-1.0, -0.3, 0.2, 1.0}) EXPECT_LE(std::fabs(o(x)), o.sup_abs);
  }
  EXPECT_DOUBLE_EQ(make_observable("indicator_half", kParams)(0.0), 1.0);
  EXPECT_DOUBLE_EQ(make_observable("cos_pi", kParams)(1.0), -1.0);
  EXPECT_DOUBLE_EQ(make_observable("coboundary:identity", kParams)(0.5), eval(kParams, 0.5) - 0.5);
  EXPECT_THROW(make_observable("square", kParams), std::invalid_argument);
  EXPECT_THROW(make_observable("coboundary:coboundary:identity", kParams), std::invalid_argument);
}

TEST(Correlation, LagZeroEqualsVarianceOnSameData) {
  const Observable id = make_observable("identity", kParams);
  std::vector<int> ns;
  for (int n = 0; n <= 10; ++n) ns.push_back(n);
  const CorrelationCurve c = correlation_curve(kParams, {id, id}, ns, small_ensemble());
  const double var = ensemble_variance(kParams, id, 10, small_ensemble());
  EXPECT_GE(c.covariance[0], 0.0);
  EXPECT_NEAR(c.covariance[0], var, 1e-10);
}

TEST(Correlation, ConstantObservableHasNoCorrelation) {
  const Observable one{"one", [](double) { return 1.0; }, 1.0, 1.0};
  const Observable id = make_observable("identity", kParams);
  // Cross sums reduce to psi sums, so every covariance is exactly zero and nothing is fitted.
  try {
    correlation_curve(kParams, {one, id}, {0, 1, 2, 3, 4}, small_ensemble());
    FAIL() << "expected DegenerateFit";
  } catch (const DegenerateFit& e) {
    EXPECT_EQ(e.points(), 0);
  }
}

TEST(Correlation, WorkerCountDoesNotChangeResult) {
  const Observable id = make_observable("identity", kParams);
  std::vector<int> ns{0, 1, 2, 3, 4, 5};
  const CorrelationCurve a = correlation_curve(kParams, {id, id}, ns, small_ensemble(), Execution{1});
  const CorrelationCurve b = correlation_curve(kParams, {id, id}, ns, small_ensemble(), Execution{3});
  EXPECT_EQ(a.covariance, b.covariance);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(LargeDeviations, ImpossibleDeviationNeverOccurs) {
  const Observable id = make_observable("identity", kParams);
  DeviationOptions o;
  o.sample_size = 500;
  o.density.bins = 64;
  o.density.n = 1000;
  o.density.sample_size = 20;
  o.reference_orbits = 4;
  o.reference_length = 2000;
  // |mean - mu| <= 2 sup|phi| always, so no positive entry remains to fit.
  EXPECT_THROW(large_deviation_curve(kParams, id, 2.5 * id.sup_abs, {5, 10, 20}, o), DegenerateFit);
  EXPECT_THROW(large_deviation_curve(kParams, id, 0.0, {5, 10, 20}, o), std::invalid_argument);
}

TEST(LargeDeviations, FractionsShrinkWithN) {
  const Observable id = make_observable("identity", kParams);
  DeviationOptions o;
  o.sample_size = 2000;
  o.density.bins = 128;
  o.density.n = 5000;
  o.density.sample_size = 50;
  o.reference_orbits = 10;
  o.reference_length = 10000;
  const DeviationCurve d = large_deviation_curve(kParams, id, 0.1, {10, 40, 80, 120}, o);
  EXPECT_GT(d.fraction.front(), d.fraction.back());
  EXPECT_GT(d.fitted_tau, 0.0);
  EXPECT_LT(d.epsilon_bias, 0.05);
}

TEST(Clt, KsDistanceHelper) {
  EXPECT_DOUBLE_EQ(ks_normal_distance({0.0}, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(ks_normal_distance({1.0, 2.0}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(ks_normal_distance({-1.0, 1.0}, 0.0), 0.5);
  EXPECT_THROW(ks_normal_distance({}, 1.0), std::invalid_argument);
}

TEST(Clt, CoboundaryFlagsZeroVariance) {
  CltOptions o;
  o.sample_size = 2000;
  o.burn_in = 100;
  const CltReport r = clt_report(kParams, make_observable("coboundary:identity", kParams), 1000, o);
  EXPECT_TRUE(r.zero_variance);
  EXPECT_GE(r.sigma2, 0.0);
  EXPECT_GE(r.ks_distance, 0.0);
  EXPECT_LE(r.ks_distance, 1.0);
}

TEST(Clt, IdentityHasPositiveVariance) {
  CltOptions o;
  o.sample_size = 2000;
  o.burn_in = 100;
  const CltReport r = clt_report(kParams, make_observable("identity", kParams), 1000, o);
  EXPECT_FALSE(r.zero_variance);
  EXPECT_GT(r.sigma2, 0.1);
  EXPECT_LE(r.ks_distance, 1.0);
  EXPECT_LE(r.ks_distance_4n, 1.0);
  EXPECT_THROW(clt_report(kParams, make_observable("identity", kParams), 999, o), std::invalid_argument);
}

TEST(Clt, WorkerCountKeepsAggregatesClose) {
  CltOptions o;
  o.sample_size = 400;
  o.burn_in = 50;
  const Observable id = make_observable("identity", kParams);
  const CltReport a = clt_report(kParams, id, 1000, o, Execution{1});
  const CltReport b = clt_report(kParams, id, 1000, o, Execution{4});
  EXPECT_EQ(a.redraws, b.redraws);
  EXPECT_NEAR(a.sigma2, b.sigma2, 1e-9);
  EXPECT_NEAR(a.ks_distance, b.ks_distance, 1e-9);
}

TEST(Stability, LadderReportsErrorBars) {
  UlamOptions u;
  u.bins = 128;
  HistogramOptions h;
  h.bins = 128;
  h.n = 2000;
  h.sample_size = 20;
  const StabilityLadder l = stability_ladder(kParams, {0.04, 0.02}, u, h, 2);
  ASSERT_EQ(l.rungs.size(), 2u);
  for (const auto& r : l.rungs) {
    EXPECT_EQ(r.mc_distances.size(), 2u);
    EXPECT_GE(r.mc_sd, 0.0);
    EXPECT_GE(r.ulam_distance, 0.0);
    EXPECT_LE(r.ulam_distance, 2.0);
  }
  EXPECT_THROW(stability_ladder(kParams, {}, u, h, 2), std::invalid_argument);
}
