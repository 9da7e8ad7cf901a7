#include "rovella/fit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rovella/errors.hpp"

namespace rovella {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  LinearFit fit;
  const auto n = static_cast<double>(x.size());
  fit.points = static_cast<int>(x.size());
  if (x.size() < 2) {
    fit.slope_se = std::numeric_limits<double>::infinity();
    return fit;
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateFit("fit_line: all abscissae coincide", fit.points);

  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  if (syy > 0.0)
    fit.r_squared = std::max(0.0, 1.0 - ss_res / syy);
  else
    fit.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  fit.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx)
                              : std::numeric_limits<double>::infinity();
  return fit;
}

ExponentialFit fit_exponential(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  std::vector<double> xs, ls;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0 && std::isfinite(y[i])) {
      xs.push_back(x[i]);
      ls.push_back(std::log(y[i]));
    }
  }
  if (xs.size() < 3)
    throw DegenerateFit("exponential fit needs at least 3 positive entries",
                        static_cast<int>(xs.size()));
  const LinearFit line = fit_line(xs, ls);
  ExponentialFit fit;
  fit.c = std::exp(line.intercept);
  fit.tau = -line.slope;
  fit.r_squared = line.r_squared;
  fit.tau_se = line.slope_se;
  fit.points = line.points;
  return fit;
}

}  // namespace rovella
