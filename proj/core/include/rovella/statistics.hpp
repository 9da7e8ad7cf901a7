#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rovella/density.hpp"
#include "rovella/map.hpp"
#include "rovella/parallel.hpp"

namespace rovella {

/// A named bounded observable on [-1, 1].
struct Observable {
  std::string name;
  std::function<double(double)> fn;
  double holder_exponent = 1.0;
  /// Upper bound for |fn| on [-1, 1].
  double sup_abs = 1.0;

  double operator()(double x) const { return fn(x); }
};

/// Catalog names: identity, cos_pi, abs, indicator_half (x >= 0), and
/// "coboundary:<name>" for psi(f(x)) - psi(x). Throws std::invalid_argument on unknown names.
Observable make_observable(const std::string& name, const MapParams& p);

std::vector<std::string> observable_catalog();

struct ObservablePair {
  Observable phi;
  Observable psi;
};

/// Ensemble of equilibrated orbits shared by the time-average estimators.
struct EnsembleOptions {
  int sample_size = 1000;
  int burn_in = 1000;
  int length = 20'000;
  std::uint64_t seed = 1;
};

/// Entries of a correlation curve below this many standard errors are left out of the fit.
inline constexpr double kSignificance = 3.0;

struct CorrelationCurve {
  std::vector<int> n_values;
  /// Signed estimate of int phi (psi o f^n) dmu - int phi dmu int psi dmu.
  std::vector<double> covariance;
  /// |covariance|, the quantity that is fitted.
  std::vector<double> correlation;
  std::vector<double> standard_error;
  double fitted_c = 0.0;
  double fitted_tau = 0.0;
  double r_squared = 0.0;
  int fit_points = 0;
  long redraws = 0;
};

/// Time averages over the window [0, length - max n) of every orbit, pooled over the ensemble.
/// The fit uses entries exceeding kSignificance standard errors; throws DegenerateFit when
/// fewer than 3 remain.
CorrelationCurve correlation_curve(const MapParams& p, const ObservablePair& pair,
                                   const std::vector<int>& n_values, const EnsembleOptions& opt,
                                   const Execution& exec = {});

/// Pooled variance of phi on the same window correlation_curve uses for n = 0
/// when max n equals `max_lag`.
double ensemble_variance(const MapParams& p, const Observable& phi, int max_lag,
                         const EnsembleOptions& opt, const Execution& exec = {});

struct DeviationOptions {
  int sample_size = 10'000;
  std::uint64_t seed = 1;
  /// Histogram run supplying mu(phi).
  HistogramOptions density{};
  /// Orbits and length of the run used to report epsilon_bias.
  int reference_orbits = 100;
  int reference_length = 100'000;
};

struct DeviationCurve {
  std::vector<int> n_values;
  std::vector<double> fraction;
  std::vector<long> count;
  double mu_phi = 0.0;
  double epsilon_bias = 0.0;
  double fitted_c = 0.0;
  double fitted_tau = 0.0;
  double r_squared = 0.0;
  int fit_points = 0;
  long redraws = 0;
};

/// Fraction of Lebesgue-random starts with |n^{-1} S_n phi - mu(phi)| > epsilon, where mu(phi)
/// integrates phi against histogram_density; exponential fit on the positive entries.
DeviationCurve large_deviation_curve(const MapParams& p, const Observable& phi, double epsilon,
                                     const std::vector<int>& n_values, const DeviationOptions& opt,
                                     const Execution& exec = {});

struct CltOptions {
  int sample_size = 10'000;
  int burn_in = 1000;
  int jackknife_groups = 20;
  std::uint64_t seed = 1;
};

struct CltReport {
  int n = 0;
  double mean = 0.0;
  /// Richardson combination (4 sigma2(4n) - sigma2(n)) / 3, clamped at 0.
  double sigma2 = 0.0;
  double sigma2_se = 0.0;
  double sigma2_n = 0.0;
  double sigma2_4n = 0.0;
  double ks_distance = 0.0;
  double ks_distance_4n = 0.0;
  /// Sup-distance at n, reported next to the reference ratio ks(4n)/ks(n).
  double berry_esseen_sup = 0.0;
  double berry_esseen_ratio = 0.0;
  bool zero_variance = false;
  long redraws = 0;
};

/// sigma2 below this, or below three jackknife errors, raises zero_variance.
inline constexpr double kZeroVarianceFloor = 1e-6;

/// Normalized Birkhoff sums at n and 4n along the same orbits, phi centered by its pooled mean.
CltReport clt_report(const MapParams& p, const Observable& phi, int n, const CltOptions& opt,
                     const Execution& exec = {});

/// sup_z |F_emp(z) - Phi(z / sigma)| for the sample; a step at 0 when sigma2 == 0.
double ks_normal_distance(std::vector<double> sample, double sigma2);

struct StabilityRung {
  double a = 0.0;
  double h = 0.0;
  double ulam_distance = 0.0;
  double mc_mean = 0.0;
  double mc_sd = 0.0;
  std::vector<double> mc_distances;
};

struct StabilityLadder {
  std::vector<StabilityRung> rungs;
  /// ulam_distance strictly decreases along the rungs in the given order of h.
  bool decreasing = false;
};

/// L1 distances between the densities at a and a + h for each h. The Ulam distance is the
/// trend statistic; histogram replicates (seed + r) give the Monte Carlo error bars.
StabilityLadder stability_ladder(const MapParams& base, const std::vector<double>& hs,
                                 const UlamOptions& ulam, const HistogramOptions& hist,
                                 int replicates, const Execution& exec = {});

}  // namespace rovella
