#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "rovella/constants.hpp"
#include "rovella/map.hpp"
#include "rovella/orbit.hpp"

namespace rovella::oracle {

// Recomputes every Birkhoff sum from scratch and tests every N directly.
// Additions run in the same order as in the engine, so results must agree exactly.
template <class Term, class Pred>
std::optional<int> naive_time(const std::vector<double>& orbit, int n_max, Term term, Pred pred) {
  std::vector<double> avg(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += term(orbit[static_cast<std::size_t>(i)]);
    avg[static_cast<std::size_t>(n)] = s / n;
  }
  for (int N = 1; N <= n_max; ++N) {
    bool all = true;
    for (int n = N; n <= n_max && all; ++n) all = pred(avg[static_cast<std::size_t>(n)]);
    if (all) return N;
  }
  return std::nullopt;
}

inline std::optional<int> naive_expansion_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max) {
  const std::vector<double> orbit = iterate(p, x, n_max);
  return naive_time(
      orbit, n_max, [&](double y) { return log_derivative(p, y); }, [&](double a) { return a > k.c_exp; });
}

inline std::optional<int> naive_recurrence_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max) {
  const std::vector<double> orbit = iterate(p, x, n_max);
  const double delta = k.recurrence_delta();
  return naive_time(
      orbit, n_max, [&](double y) { return -std::log(std::fabs(y) <= delta ? std::fabs(y) : 1.0); },
      [&](double a) { return a < k.epsilon_rec; });
}

/// Arcsine distribution function, invariant for a = 0, s = 2.
inline double arcsine_cdf(double x) { return 0.5 + std::asin(std::clamp(x, -1.0, 1.0)) / M_PI; }

}  // namespace rovella::oracle
