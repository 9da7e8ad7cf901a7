#pragma once

#include <vector>

#include "rovella/constants.hpp"
#include "rovella/map.hpp"

namespace rovella {

inline constexpr int kBoundPeriodHorizon = 1'000'000;
inline constexpr int kBoundPeriodProbes = 11;

struct BoundPeriodProbeLog {
  int discarded = 0;
};

/// p(m): the least, over 11 probes spanning I_m^+ (both ends and 9 interior points), of
/// the first j >= 1 at which |f^j(x) - f^{j-1}(-+1)| exceeds e^{-beta j}. Capped at 10^6.
int bound_period(const MapParams& p, const AnalysisConstants& k, int m,
                 BoundPeriodProbeLog* log = nullptr);

/// Single-point version p(x) for a point x near 0 (side taken from its sign).
int point_bound_period(const MapParams& p, const AnalysisConstants& k, double x,
                       int horizon = kBoundPeriodHorizon);

/// Two-sided estimate s|m|/(beta+log 4) - K <= p(m) <= (s+1)|m|/(beta+log lambda_c)
/// with K = (-log 4 + log(K1/s) + s)/(beta + log 4).
struct BoundPeriodEnvelope {
  double lower = 0.0;
  double upper = 0.0;
  double k_offset = 0.0;
};
BoundPeriodEnvelope bound_period_envelope(const MapParams& p, const AnalysisConstants& k, int m);

/// p(m) cached for Delta <= |m| <= depth_cap; deeper depths are computed on demand.
class BoundPeriodTable {
 public:
  BoundPeriodTable(const MapParams& p, const AnalysisConstants& k, int depth_cap);

  int operator()(int m) const;
  int depth_cap() const noexcept { return depth_cap_; }
  int discarded_probes() const noexcept { return discarded_; }

 private:
  MapParams params_;
  AnalysisConstants consts_;
  int depth_cap_;
  int discarded_ = 0;
  std::vector<int> table_;
};

}  // namespace rovella
