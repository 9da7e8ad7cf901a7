#include "rovella/bound_period.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace rovella {

namespace {

// First j >= 1 with |f^j(x) - f^{j-1}(v)| > e^{-beta j}, where v = -1 for x > 0 and +1
// for x < 0. The gap is carried as an offset from the critical orbit, since f(x) rounds
// to v itself once |x| < e^{-25} or so. Throws SingularityHit if either orbit reaches 0.
int probe_period(const MapParams& p, double beta, double x, int horizon) {
  double v = x > 0.0 ? -1.0 : 1.0;
  const double gap0 = std::exp(std::log(p.coeff()) + p.s() * std::log(std::fabs(x)));
  double gap = x > 0.0 ? gap0 : -gap0;
  for (int j = 1; j < horizon; ++j) {
    if (std::fabs(gap) > std::exp(-beta * j)) return j;
    const double y = v + gap;
    if (std::fabs(v) < kSingularityFloor) throw SingularityHit(j - 1, v);
    if (std::fabs(y) < kSingularityFloor) throw SingularityHit(j, y);
    const double fv = eval(p, v);
    if ((y > 0.0) == (v > 0.0)) {
      const double av = std::fabs(v);
      const double rise = p.coeff() * std::pow(av, p.s()) * std::expm1(p.s() * std::log1p(gap / v));
      gap = v > 0.0 ? rise : -rise;
    } else {
      gap = eval(p, y) - fv;
    }
    v = fv;
  }
  return horizon;
}

}  // namespace

int point_bound_period(const MapParams& p, const AnalysisConstants& k, double x, int horizon) {
  if (x == 0.0) throw SingularityHit(0, x);
  return probe_period(p, k.beta, x, horizon);
}

int bound_period(const MapParams& p, const AnalysisConstants& k, int m, BoundPeriodProbeLog* log) {
  const int d = std::abs(m);
  if (d < k.delta_big) throw std::invalid_argument("bound_period: |m| must be >= delta_big");
  const double side = m > 0 ? 1.0 : -1.0;
  const double lo = std::exp(-static_cast<double>(d) - 2.0);
  const double hi = std::exp(-static_cast<double>(d) + 1.0);

  int best = kBoundPeriodHorizon;
  int usable = 0;
  for (int i = 0; i < kBoundPeriodProbes; ++i) {
    const double x = i == kBoundPeriodProbes - 1 ? hi : lo + (hi - lo) * i / (kBoundPeriodProbes - 1);
    try {
      best = std::min(best, probe_period(p, k.beta, side * x, kBoundPeriodHorizon));
      ++usable;
    } catch (const SingularityHit&) {
      if (log) ++log->discarded;
    }
  }
  return usable > 0 ? best : 1;
}

BoundPeriodEnvelope bound_period_envelope(const MapParams& p, const AnalysisConstants& k, int m) {
  const double s = p.s();
  const double d = std::abs(m);
  const double log4 = std::log(4.0);
  BoundPeriodEnvelope env;
  env.k_offset = (-log4 + std::log(p.envelope() / s) + s) / (k.beta + log4);
  env.lower = s * d / (k.beta + log4) - env.k_offset;
  env.upper = (s + 1.0) * d / k.bound_rate();
  return env;
}

BoundPeriodTable::BoundPeriodTable(const MapParams& p, const AnalysisConstants& k, int depth_cap)
    : params_(p), consts_(k), depth_cap_(depth_cap) {
  if (depth_cap < k.delta_big) throw std::invalid_argument("bound period table: cap below delta_big");
  BoundPeriodProbeLog log;
  for (int d = k.delta_big; d <= depth_cap; ++d) table_.push_back(bound_period(p, k, d, &log));
  discarded_ = log.discarded;
}

int BoundPeriodTable::operator()(int m) const {
  const int d = std::abs(m);
  if (d < consts_.delta_big) throw std::invalid_argument("bound period table: |m| below delta_big");
  if (d <= depth_cap_) return table_[static_cast<std::size_t>(d - consts_.delta_big)];
  return bound_period(params_, consts_, d);
}

}  // namespace rovella
