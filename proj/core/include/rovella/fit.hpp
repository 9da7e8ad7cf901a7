#pragma once

#include <span>

namespace rovella {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Standard error of the slope; infinite when fewer than 3 points.
  double slope_se = 0.0;
  int points = 0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// y ~ C e^{-tau x}, fitted on log y over the strictly positive entries.
struct ExponentialFit {
  double c = 0.0;
  double tau = 0.0;
  double r_squared = 0.0;
  double tau_se = 0.0;
  int points = 0;
};

/// Throws DegenerateFit when fewer than 3 positive entries remain.
ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y);

}  // namespace rovella
