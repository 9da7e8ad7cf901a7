#pragma once

#include <cmath>
#include <string>

#include "rovella/errors.hpp"

namespace rovella {

/// Orbits closer to 0 than this are treated as having hit the singularity.
inline constexpr double kSingularityFloor = 1e-300;

/// One member of the family f_a(x) = sign(x) * (-1 + (2 - a)|x|^s).
class MapParams {
 public:
  static constexpr double kDefaultS = 1.5;
  static constexpr double kDefaultAMax = 0.5;

  explicit MapParams(double a, double s = kDefaultS, double a_max = kDefaultAMax);

  double a() const noexcept { return a_; }
  double s() const noexcept { return s_; }
  double a_max() const noexcept { return a_max_; }
  /// 2 - a
  double coeff() const noexcept { return coeff_; }
  /// coeff * s, the constant in |f'(x)| = K |x|^(s-1)
  double envelope() const noexcept { return envelope_; }
  double log_envelope() const noexcept { return log_envelope_; }

  MapParams with_a(double a) const { return MapParams(a, s_, a_max_); }

 private:
  double a_;
  double s_;
  double a_max_;
  double coeff_;
  double envelope_;
  double log_envelope_;
};

inline double eval(const MapParams& p, double x) {
  if (x == 0.0) throw SingularityHit(0, x);
  const double y = -1.0 + p.coeff() * std::pow(std::fabs(x), p.s());
  return x > 0.0 ? y : -y;
}

inline double derivative(const MapParams& p, double x) {
  if (x == 0.0) throw SingularityHit(0, x);
  return p.envelope() * std::pow(std::fabs(x), p.s() - 1.0);
}

/// log f'(x) = log(coeff*s) + (s-1) log|x|. Every log-derivative sum in the
/// library goes through this function so independent recomputations agree bitwise.
inline double log_derivative(const MapParams& p, double x) {
  if (x == 0.0) throw SingularityHit(0, x);
  return p.log_envelope() + (p.s() - 1.0) * std::log(std::fabs(x));
}

/// One-sided limit of f at 0: -1 from the right (side > 0), +1 from the left.
inline double limit_at_zero(int side) { return side > 0 ? -1.0 : 1.0; }

/// Inverse of the branch on side sign(side): maps y in [-1,1] back to (0,1] or [-1,0).
inline double inverse_branch(const MapParams& p, double y, int side) {
  if (side > 0) {
    const double u = (y + 1.0) / p.coeff();
    return std::pow(u > 0.0 ? u : 0.0, 1.0 / p.s());
  }
  const double u = (1.0 - y) / p.coeff();
  return -std::pow(u > 0.0 ? u : 0.0, 1.0 / p.s());
}

/// Closed-form Schwarzian derivative, -(s-1)(s+1)/(2x^2).
double schwarzian(const MapParams& p, double x);

struct ValidationReport {
  double k1 = 0.0;
  double k2 = 0.0;
  double schwarzian_max = 0.0;
  bool monotone_ok = false;
  bool limits_ok = false;
  std::string notes;
};

/// Checks monotonicity, the one-sided limits and Schwarzian sign on a symmetric
/// grid of 2*grid_size points excluding 0.
ValidationReport validate_params(const MapParams& p, int grid_size);

}  // namespace rovella
