#include <gtest/gtest.h>

#include <cmath>

#include "rovella/parameter_lab.hpp"

using namespace rovella;

namespace {

AnalysisConstants consts(double s, double lambda_c) {
  ConstantsSpec spec;
  spec.lambda_c = lambda_c;
  return resolve_constants(spec, s);
}

}  // namespace

TEST(Certify, ZeroParameterPassesGrowthButNotCoverage) {
  const MapParams p(0.0, 2.0);
  const AnalysisConstants k = consts(2.0, 1.5);
  CertifyOptions o;
  const CertificationReport r = certify(p, k, o);
  EXPECT_TRUE(r.certified) << r.reason;
  EXPECT_NEAR(r.c2_margin, std::log(4.0) - std::log(1.5), 1e-10);
  EXPECT_NEAR(r.c3_margin, k.alpha, 1e-15);
  EXPECT_DOUBLE_EQ(r.fa_fraction, 1.0);
  EXPECT_FALSE(r.c4_ok);
  EXPECT_EQ(r.free_time + r.bound_time, static_cast<long>(o.horizon));
  o.require_c4 = true;
  EXPECT_FALSE(certify(p, k, o).certified);
}

TEST(Certify, ThresholdAboveExactExponentFails) {
  const CertificationReport r = certify(MapParams(0.0, 2.0), consts(2.0, 4.5), CertifyOptions{});
  EXPECT_LT(r.c2_margin, 0.0);
  EXPECT_FALSE(r.certified);
}

TEST(Certify, DeterministicAndAccountsEveryStep) {
  const MapParams p(0.14);
  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  CertifyOptions o;
  o.horizon = 500;
  const CertificationReport a = certify(p, k, o);
  const CertificationReport b = certify(p, k, o);
  EXPECT_EQ(a.c2_margin, b.c2_margin);
  EXPECT_EQ(a.c3_margin, b.c3_margin);
  EXPECT_EQ(a.fa_fraction, b.fa_fraction);
  EXPECT_EQ(a.free_time + a.bound_time, static_cast<long>(o.horizon));
  EXPECT_TRUE(std::isfinite(a.c2_margin));
  EXPECT_TRUE(std::isfinite(a.c3_margin));
  EXPECT_EQ(a.certified, a.c2_margin >= 0 && a.c3_margin >= 0 && a.fa_fraction >= 1 - o.eps_fa);
  o.horizon = 50;
  EXPECT_THROW(certify(p, k, o), std::invalid_argument);
}

TEST(Scan, GridAndNestedAgreement) {
  EXPECT_EQ(scan_grid(0.0, 1.0, 1), std::vector<double>{0.0});
  const auto g = scan_grid(0.0, 0.2, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g[4], 0.2);
  EXPECT_THROW(scan_grid(0.0, 1.0, 0), std::invalid_argument);

  const AnalysisConstants k = AnalysisConstants::defaults(1.5);
  CertifyOptions o;
  o.horizon = 300;
  const ScanResult coarse = scan(0.02, 0.18, 5, 1.5, k, o);
  const ScanResult fine = scan(0.02, 0.18, 9, 1.5, k, o, Execution{2});
  for (std::size_t i = 0; i < coarse.reports.size(); ++i) {
    EXPECT_EQ(coarse.reports[i].param_a, fine.reports[2 * i].param_a);
    EXPECT_EQ(coarse.reports[i].c3_margin, fine.reports[2 * i].c3_margin);
    EXPECT_EQ(coarse.reports[i].certified, fine.reports[2 * i].certified);
  }
  ASSERT_EQ(fine.density.size(), 9u);
  for (const auto& d : fine.density) {
    EXPECT_GE(d.certified_fraction, 0.0);
    EXPECT_LE(d.certified_fraction, 1.0);
  }
}

TEST(Scan, SinglePointAtZero) {
  const ScanResult r = scan(0.0, 0.0, 1, 2.0, consts(2.0, 1.5), CertifyOptions{});
  ASSERT_EQ(r.density.size(), 1u);
  EXPECT_DOUBLE_EQ(r.density[0].certified_fraction, 1.0);
}
