#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rovella/constants.hpp"
#include "rovella/map.hpp"
#include "rovella/parallel.hpp"

namespace rovella {

/// A stabilization time, or nullopt when the defining property fails at the horizon
/// itself (ExceedsHorizon).
using HorizonTime = std::optional<int>;

/// (x0, f(x0), ..., f^n(x0)). Throws SingularityHit carrying the hitting time.
std::vector<double> iterate(const MapParams& p, double x0, int n);

/// |x - y| when it is at most delta, else 1.
inline double truncated_distance(double x, double y, double delta) {
  const double d = x > y ? x - y : y - x;
  return d <= delta ? d : 1.0;
}

/// Least N such that (1/n) sum_{i<n} log f'(f^i x) > c_exp for every N <= n <= n_max.
HorizonTime expansion_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max);

/// Least N such that (1/n) sum_{i<n} -log d_delta(f^i x, 0) < epsilon_rec for every
/// N <= n <= n_max, with delta = e^{-Theta}.
HorizonTime recurrence_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max);

struct StabilizationTimes {
  HorizonTime expansion;
  HorizonTime recurrence;
};

/// Both time functions from a single orbit.
StabilizationTimes stabilization_times(const MapParams& p, double x, const AnalysisConstants& k,
                                       int n_max);

/// round(1.3^k) for k = 0, 1, ..., deduplicated, capped and terminated by n_max.
std::vector<int> geometric_ladder(int n_max, double ratio = 1.3);

struct TailCurve {
  std::vector<int> n_values;
  std::vector<double> gamma_fraction;
  std::vector<long> gamma_count;
  double fitted_c = 0.0;
  double fitted_tau = 0.0;
  double r_squared = 0.0;
  int fit_points = 0;
  /// Some fractions were zero and were left out of the fit.
  bool fit_truncated = false;
  int sample_size = 0;
  std::uint64_t seed = 0;
  long redraws = 0;
};

/// Estimated |Gamma^n| over a geometric n ladder with an exponential fit.
/// Throws DegenerateFit when fewer than 3 positive fractions remain.
TailCurve tail_curve(const MapParams& p, const AnalysisConstants& k, int sample_size, int n_max,
                     std::uint64_t seed, const Execution& exec = {});

/// Fraction of [-1,1] (normalized Lebesgue) with |f^i(x)| <= e^{-alpha n} for some 1 <= i <= n.
double deep_approach_fraction(const MapParams& p, int sample_size, int n, double alpha,
                              std::uint64_t seed, const Execution& exec = {});

/// Redraw attempts per Monte Carlo sample before singularity hits count as exhaustion.
inline constexpr int kMaxRedraws = 1000;

}  // namespace rovella
