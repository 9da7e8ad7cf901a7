#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rovella/density.hpp"
#include "rovella/errors.hpp"

using namespace rovella;

TEST(DensityEstimate, NormalizesAndValidates) {
  const DensityEstimate d({1.0, 3.0}, DensityMethod::exact);
  EXPECT_DOUBLE_EQ(d.mass()[0], 0.25);
  EXPECT_DOUBLE_EQ(d.edge(1), 0.0);
  EXPECT_DOUBLE_EQ(d.center(0), -0.5);
  EXPECT_THROW(DensityEstimate({-1.0, 2.0}, DensityMethod::exact), std::invalid_argument);
  EXPECT_THROW(DensityEstimate({0.0, 0.0}, DensityMethod::exact), std::invalid_argument);
}

TEST(L1Distance, ExtremesAndMismatch) {
  const DensityEstimate a({1.0, 0.0}, DensityMethod::exact);
  const DensityEstimate b({0.0, 1.0}, DensityMethod::exact);
  EXPECT_DOUBLE_EQ(l1_distance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(l1_distance(a, b), 2.0);
  EXPECT_THROW(l1_distance(a, DensityEstimate({1.0, 1.0, 1.0}, DensityMethod::exact)), BinMismatch);
}

TEST(Histogram, SingleBinAndPreconditions) {
  HistogramOptions o;
  o.bins = 1;
  o.n = 100;
  o.sample_size = 10;
  o.burn_in = 10;
  const DensityEstimate d = histogram_density(MapParams(0.14), o);
  ASSERT_EQ(d.bins(), 1);
  EXPECT_DOUBLE_EQ(d.mass()[0], 1.0);
  o.bins = 64;
  o.n = 639;
  EXPECT_THROW(histogram_density(MapParams(0.14), o), std::invalid_argument);
}

TEST(Histogram, UnitMassAndSeedDeterminism) {
  HistogramOptions o;
  o.bins = 64;
  o.n = 2000;
  o.sample_size = 50;
  o.burn_in = 100;
  const DensityEstimate a = histogram_density(MapParams(0.14), o, Execution{1});
  const DensityEstimate b = histogram_density(MapParams(0.14), o, Execution{3});
  double total = 0.0;
  for (double m : a.mass()) {
    EXPECT_GE(m, 0.0);
    total += m;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(a.mass(), b.mass());
  EXPECT_EQ(a.redraws, b.redraws);
}

TEST(Histogram, DoublingLengthStaysWithinBinomialError) {
  HistogramOptions o;
  o.bins = 32;
  o.n = 20'000;
  o.sample_size = 100;
  const DensityEstimate a = histogram_density(MapParams(0.14), o);
  o.n *= 2;
  const DensityEstimate b = histogram_density(MapParams(0.14), o);
  // Orbit points are correlated; the error bar uses the smaller run and is inflated by
  // an integrated autocorrelation factor of 4 for the mixing time of this map.
  const double points = static_cast<double>(o.sample_size) * (o.n / 2);
  for (int i = 0; i < a.bins(); ++i) {
    const double p = a.mass()[static_cast<std::size_t>(i)];
    const double se = std::sqrt(4.0 * p * (1 - p) / points);
    EXPECT_LE(std::fabs(a.mass()[static_cast<std::size_t>(i)] - b.mass()[static_cast<std::size_t>(i)]), 3 * se + 1e-12)
        << "bin " << i;
  }
}

TEST(Ulam, RowsStochasticAndFixedPoint) {
  const MapParams p(0.14);
  const UlamMatrix m = ulam_matrix(p, 256, 16);
  for (int r = 0; r < m.bins; ++r) EXPECT_NEAR(m.row_sum(r), 1.0, 1e-12);
  UlamOptions o;
  o.bins = 256;
  o.subdivisions = 16;
  const DensityEstimate d = ulam_density(p, o);
  EXPECT_LT(ulam_residual(m, d), o.tol);
  EXPECT_EQ(d.method(), DensityMethod::ulam);
}

TEST(Ulam, PreconditionsAndNonConvergence) {
  const MapParams p(0.14);
  UlamOptions o;
  o.bins = 8;
  EXPECT_THROW(ulam_density(p, o), std::invalid_argument);
  o.bins = 64;
  o.subdivisions = 4;
  EXPECT_THROW(ulam_density(p, o), std::invalid_argument);
  o.subdivisions = 8;
  o.max_iter = 2;
  EXPECT_THROW(ulam_density(p, o), NoConvergence);
}

TEST(Ulam, AgreesWithHistogram) {
  const MapParams p(0.14);
  UlamOptions u;
  u.bins = 128;
  HistogramOptions h;
  h.bins = 128;
  h.n = 20'000;
  h.sample_size = 200;
  EXPECT_LT(l1_distance(ulam_density(p, u), histogram_density(p, h)), 0.05);
}

TEST(Ulam, MatchesArcsineAtChebyshevParameter) {
  // The arcsine density is singular at the endpoints, so convergence is slow but monotone.
  const MapParams p(0.0, 2.0);
  double previous = 2.0;
  for (int bins : {128, 256, 512, 1024}) {
    UlamOptions o;
    o.bins = bins;
    const double d = l1_distance(ulam_density(p, o), density_from_cdf(bins, oracle::arcsine_cdf));
    EXPECT_LT(d, previous) << bins;
    previous = d;
  }
  EXPECT_LT(previous, 0.05);
}

TEST(Entropy, ArcsineGivesLogTwo) {
  const MapParams p(0.0, 2.0);
  const DensityEstimate d = density_from_cdf(1024, oracle::arcsine_cdf);
  EXPECT_NEAR(metric_entropy(p, d), std::log(2.0), 1e-2);
}

TEST(Entropy, ArcsineMatchesFineQuadrature) {
  // Independent check: midpoint rule in the angle variable x = -cos(pi u), where the
  // arcsine law becomes uniform.
  const MapParams p(0.0, 2.0);
  const int n = 2'000'000;
  double q = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -std::cos(M_PI * (i + 0.5) / n);
    q += log_derivative(p, x);
  }
  q /= n;
  EXPECT_NEAR(metric_entropy(p, density_from_cdf(1024, oracle::arcsine_cdf)), q, 1e-2);
}

TEST(Entropy, PointMassAtOne) {
  std::vector<double> mass(1024, 0.0);
  mass.back() = 1.0;
  EXPECT_NEAR(metric_entropy(MapParams(0.0, 2.0), DensityEstimate(mass, DensityMethod::exact)), std::log(4.0), 1e-2);
}

TEST(Entropy, InvariantUnderRefinement) {
  const MapParams p(0.1);
  std::vector<double> coarse(128), fine(256);
  for (int i = 0; i < 128; ++i) {
    coarse[static_cast<std::size_t>(i)] = 1.0 + 0.5 * std::sin(0.1 * i);
    fine[2 * static_cast<std::size_t>(i)] = fine[2 * static_cast<std::size_t>(i) + 1] = 0.5 * coarse[static_cast<std::size_t>(i)];
  }
  const double hc = metric_entropy(p, DensityEstimate(coarse, DensityMethod::exact));
  const double hf = metric_entropy(p, DensityEstimate(fine, DensityMethod::exact));
  EXPECT_NEAR(hc, hf, 1e-3);
}

TEST(Entropy, SingularBinUsesClosedForm) {
  // All mass in the two bins touching 0: the average of log f' over [0, w] is
  // log(cs) + (s-1)(log w - 1).
  const MapParams p(0.1, 1.5);
  std::vector<double> mass(16, 0.0);
  mass[7] = mass[8] = 0.5;
  const double w = 2.0 / 16;
  const double expected = p.log_envelope() + (p.s() - 1) * (std::log(w) - 1);
  EXPECT_NEAR(metric_entropy(p, DensityEstimate(mass, DensityMethod::exact)), expected, 1e-12);
}
