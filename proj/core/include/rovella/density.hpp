#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rovella/map.hpp"
#include "rovella/parallel.hpp"

namespace rovella {

enum class DensityMethod { histogram, ulam, exact };

/// Probability vector over a uniform grid of `bins` cells on [-1, 1].
class DensityEstimate {
 public:
  DensityEstimate(std::vector<double> mass, DensityMethod method);

  int bins() const noexcept { return static_cast<int>(mass_.size()); }
  const std::vector<double>& mass() const noexcept { return mass_; }
  DensityMethod method() const noexcept { return method_; }
  double width() const noexcept { return 2.0 / bins(); }
  double edge(int i) const noexcept { return -1.0 + 2.0 * i / bins(); }
  double center(int i) const noexcept { return -1.0 + (2.0 * i + 1.0) / bins(); }

  // Provenance.
  long samples = 0;
  long steps = 0;
  long iterations = 0;
  long redraws = 0;
  std::uint64_t seed = 0;
  double residual = 0.0;

 private:
  std::vector<double> mass_;
  DensityMethod method_;
};

std::string to_string(DensityMethod m);

struct HistogramOptions {
  int burn_in = 1000;
  long n = 20'000;
  int sample_size = 1000;
  int bins = 1024;
  std::uint64_t seed = 1;
};

/// Pools orbit points of sample_size seeds (after burn_in) into a normalized histogram.
/// Requires n >= 10 * bins.
DensityEstimate histogram_density(const MapParams& p, const HistogramOptions& opt,
                                  const Execution& exec = {});

/// Integer bin counts behind histogram_density, for replicate error bars.
std::vector<long> histogram_counts(const MapParams& p, const HistogramOptions& opt,
                                   const Execution& exec, long* redraws = nullptr);

struct UlamOptions {
  int bins = 1024;
  int subdivisions = 32;
  double tol = 1e-10;
  long max_iter = 100'000;
};

/// Row-stochastic transition matrix of the Ulam discretization in CSR form.
struct UlamMatrix {
  int bins = 0;
  std::vector<long> row_start;
  std::vector<int> col;
  std::vector<double> value;

  double row_sum(int r) const;
};

/// Each bin is split into `subdivisions` equal pieces; every piece is mapped exactly
/// (f is monotone on it) and its share of mass is spread over the bins its image meets,
/// in proportion to overlap length.
UlamMatrix ulam_matrix(const MapParams& p, int bins, int subdivisions);

/// Stationary vector of the Ulam matrix by power iteration; throws NoConvergence.
DensityEstimate ulam_density(const MapParams& p, const UlamOptions& opt);

/// || mass P - mass ||_1
double ulam_residual(const UlamMatrix& m, const DensityEstimate& d);

/// sum_i |m1_i - m2_i|; throws BinMismatch.
double l1_distance(const DensityEstimate& a, const DensityEstimate& b);

/// Rokhlin integral sum_b mass_b log f'(center_b); bins touching 0 integrate log f'
/// over 64 geometric sub-bins in closed form.
double metric_entropy(const MapParams& p, const DensityEstimate& d);

/// Bin masses F(e_{i+1}) - F(e_i) of a distribution function on [-1, 1].
DensityEstimate density_from_cdf(int bins, const std::function<double(double)>& cdf);

}  // namespace rovella
