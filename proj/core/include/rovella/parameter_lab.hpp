#pragma once

#include <string>
#include <vector>

#include "rovella/constants.hpp"
#include "rovella/map.hpp"
#include "rovella/parallel.hpp"

namespace rovella {

struct CertifyOptions {
  int horizon = 1000;
  double eps_fa = 0.1;
  int coverage_bins = 64;
  double coverage_threshold = 0.9;
  /// Include the coverage heuristic in the certified conjunction.
  bool require_c4 = false;
};

struct CertificationReport {
  double param_a = 0.0;
  int horizon = 0;
  /// min over n <= N of (1/n) log (f^n)'(+-1) - log lambda_c, worse side.
  double c2_margin = 0.0;
  /// min over n <= N of log|f^{n-1}(+-1)| + alpha n, worse side.
  double c3_margin = 0.0;
  /// Free-time fraction of the critical orbits at N, worse side.
  double fa_fraction = 0.0;
  double coverage = 0.0;
  long free_time = 0;
  long bound_time = 0;
  bool c4_ok = false;
  bool certified = false;
  std::string reason;
};

/// Finite-horizon check of the growth, basic-assumption and free-period conditions along
/// both critical orbits. A singularity hit yields an uncertified report with a reason.
CertificationReport certify(const MapParams& p, const AnalysisConstants& k, const CertifyOptions& opt);

struct DensityPoint {
  double a = 0.0;
  double certified_fraction = 0.0;
};

struct ScanResult {
  std::vector<CertificationReport> reports;
  /// For each grid point a_i, the certified fraction among grid points <= a_i.
  std::vector<DensityPoint> density;
};

/// Grid points a_i = lo + (hi - lo) i / (grid - 1); a single point when grid = 1.
std::vector<double> scan_grid(double lo, double hi, int grid);

ScanResult scan(double a_lo, double a_hi, int grid, double s, const AnalysisConstants& k,
                const CertifyOptions& opt, const Execution& exec = {});

}  // namespace rovella
