#include "rovella/parameter_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rovella/bound_period.hpp"
#include "rovella/grid.hpp"

namespace rovella {

namespace {

struct SideReport {
  double c2 = std::numeric_limits<double>::infinity();
  double c3 = std::numeric_limits<double>::infinity();
  long free_time = 0;
  long bound_time = 0;
};

SideReport critical_side(const MapParams& p, const AnalysisConstants& k, const BoundPeriodTable& bounds,
                         int horizon, double v, std::vector<bool>& visited) {
  SideReport out;
  const double log_lambda = std::log(k.lambda_c);
  const double radius = k.critical_radius();
  const auto bins = static_cast<double>(visited.size());
  auto mark = [&](double x) {
    const auto b = static_cast<std::size_t>(std::clamp((x + 1.0) / 2.0 * bins, 0.0, bins - 1.0));
    visited[b] = true;
  };

  double x = v;  // f^{n-1}(v) at the top of iteration n
  double log_sum = 0.0;
  long window_end = 0;
  mark(x);
  for (int n = 1; n <= horizon; ++n) {
    if (std::fabs(x) < kSingularityFloor) throw SingularityHit(n - 1, x);
    out.c3 = std::min(out.c3, std::log(std::fabs(x)) + k.alpha * n);
    log_sum += log_derivative(p, x);
    out.c2 = std::min(out.c2, log_sum / n - log_lambda);

    x = eval(p, x);  // f^n(v)
    mark(x);
    const bool bound = n <= window_end;
    if (bound)
      ++out.bound_time;
    else
      ++out.free_time;
    if (std::fabs(x) < radius) {
      if (std::fabs(x) < kSingularityFloor) throw SingularityHit(n, x);
      const int depth = DepthGrid::depth_of(x);
      window_end = std::max<long>(window_end, n + bounds(depth));
    }
  }
  return out;
}

}  // namespace

CertificationReport certify(const MapParams& p, const AnalysisConstants& k, const CertifyOptions& opt) {
  if (opt.horizon < 100) throw std::invalid_argument("certify: horizon must be >= 100");
  if (opt.coverage_bins < 1) throw std::invalid_argument("certify: coverage_bins must be >= 1");
  k.validate();

  CertificationReport report;
  report.param_a = p.a();
  report.horizon = opt.horizon;
  std::vector<bool> visited(static_cast<std::size_t>(opt.coverage_bins), false);
  try {
    const BoundPeriodTable bounds(p, k, k.delta_big + 40);
    const SideReport minus = critical_side(p, k, bounds, opt.horizon, -1.0, visited);
    const SideReport plus = critical_side(p, k, bounds, opt.horizon, 1.0, visited);
    report.c2_margin = std::min(minus.c2, plus.c2);
    report.c3_margin = std::min(minus.c3, plus.c3);
    const SideReport& worse = minus.free_time <= plus.free_time ? minus : plus;
    report.free_time = worse.free_time;
    report.bound_time = worse.bound_time;
    report.fa_fraction = static_cast<double>(worse.free_time) / opt.horizon;
  } catch (const SingularityHit& hit) {
    report.certified = false;
    report.reason = std::string("critical orbit: ") + hit.what();
    return report;
  }
  report.coverage = static_cast<double>(std::count(visited.begin(), visited.end(), true)) /
                    opt.coverage_bins;
  report.c4_ok = report.coverage >= opt.coverage_threshold;

  const bool c2 = report.c2_margin >= 0.0;
  const bool c3 = report.c3_margin >= 0.0;
  const bool fa = report.fa_fraction >= 1.0 - opt.eps_fa;
  report.certified = c2 && c3 && fa && (!opt.require_c4 || report.c4_ok);
  if (!c2) report.reason += "C2 margin negative; ";
  if (!c3) report.reason += "C3 margin negative; ";
  if (!fa) report.reason += "free-time fraction below 1 - eps_FA; ";
  if (opt.require_c4 && !report.c4_ok) report.reason += "coverage below threshold; ";
  if (report.reason.empty()) report.reason = "ok";
  return report;
}

std::vector<double> scan_grid(double lo, double hi, int grid) {
  if (grid < 1) throw std::invalid_argument("scan: grid must be >= 1");
  if (!(lo <= hi)) throw std::invalid_argument("scan: empty parameter range");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(grid));
  if (grid == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < grid; ++i) out.push_back(lo + (hi - lo) * i / (grid - 1));
  return out;
}

ScanResult scan(double a_lo, double a_hi, int grid, double s, const AnalysisConstants& k,
                const CertifyOptions& opt, const Execution& exec) {
  const std::vector<double> points = scan_grid(a_lo, a_hi, grid);
  const double a_max = std::max(MapParams::kDefaultAMax, a_hi);
  ScanResult result;
  result.reports.resize(points.size());
  for_each_chunk(points.size(), 1, exec, [&](std::size_t, std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i)
      result.reports[i] = certify(MapParams(points[i], s, a_max), k, opt);
  });
  long certified = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (result.reports[i].certified) ++certified;
    result.density.push_back({points[i], static_cast<double>(certified) / static_cast<double>(i + 1)});
  }
  return result;
}

}  // namespace rovella
