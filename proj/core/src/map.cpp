#include "rovella/map.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rovella {

MapParams::MapParams(double a, double s, double a_max) : a_(a), s_(s), a_max_(a_max) {
  if (!std::isfinite(s) || !(s > 1.0) || s > 3.0)
    throw InvalidParams("map: s must lie in (1, 3]");
  if (!std::isfinite(a_max) || a_max < 0.0 || !(a_max < 2.0))
    throw InvalidParams("map: a_max must lie in [0, 2)");
  if (!std::isfinite(a) || a < 0.0 || a > a_max)
    throw InvalidParams("map: a must lie in [0, a_max]");
  coeff_ = 2.0 - a;
  envelope_ = coeff_ * s;
  log_envelope_ = std::log(envelope_);
}

double schwarzian(const MapParams& p, double x) {
  if (x == 0.0) throw SingularityHit(0, x);
  const double s = p.s();
  return -(s - 1.0) * (s + 1.0) / (2.0 * x * x);
}

ValidationReport validate_params(const MapParams& p, int grid_size) {
  if (grid_size < 16) throw std::invalid_argument("validate_params: grid_size must be >= 16");

  ValidationReport report;
  report.k1 = p.envelope();
  report.k2 = p.envelope();

  // Grid points i/grid_size on each side, i = 1..grid_size.
  std::vector<double> grid;
  grid.reserve(2 * static_cast<std::size_t>(grid_size));
  for (int i = grid_size; i >= 1; --i) grid.push_back(-static_cast<double>(i) / grid_size);
  for (int i = 1; i <= grid_size; ++i) grid.push_back(static_cast<double>(i) / grid_size);

  bool monotone = true;
  double smax = -std::numeric_limits<double>::infinity();
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double y = eval(p, x);
    const bool new_branch = i == 0 || (grid[i - 1] < 0.0 && x > 0.0);
    if (!new_branch && !(y > prev)) monotone = false;
    if (std::fabs(y) > 1.0) monotone = false;
    prev = y;
    smax = std::max(smax, schwarzian(p, x));
  }
  report.monotone_ok = monotone;
  report.schwarzian_max = smax;

  const double tiny = 1e-12;
  const double right = eval(p, tiny);
  const double left = eval(p, -tiny);
  report.limits_ok = std::fabs(right - limit_at_zero(+1)) < 1e-9 &&
                     std::fabs(left - limit_at_zero(-1)) < 1e-9 &&
                     std::fabs(eval(p, 1.0) - (1.0 - p.a())) < 1e-15;

  if (!report.monotone_ok) report.notes += "branch not strictly increasing on grid; ";
  if (!report.limits_ok) report.notes += "one-sided limits at 0 differ from -1/+1; ";
  if (!(report.schwarzian_max < 0.0)) report.notes += "Schwarzian not negative; ";
  if (report.notes.empty()) report.notes = "ok";
  return report;
}

}  // namespace rovella
