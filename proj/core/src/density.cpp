#include "rovella/density.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rovella/errors.hpp"
#include "rovella/grid.hpp"
#include "rovella/orbit.hpp"

namespace rovella {

DensityEstimate::DensityEstimate(std::vector<double> mass, DensityMethod method)
    : mass_(std::move(mass)), method_(method) {
  if (mass_.empty()) throw std::invalid_argument("density: no bins");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("density: negative or non-finite mass");
    total += m;
  }
  if (!(total > 0.0)) throw std::invalid_argument("density: zero total mass");
  for (double& m : mass_) m /= total;
}

std::string to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::histogram: return "histogram";
    case DensityMethod::ulam: return "ulam";
    case DensityMethod::exact: return "exact";
  }
  return "unknown";
}

namespace {

int bin_of(double x, int bins) {
  const int b = static_cast<int>(std::floor((x + 1.0) * 0.5 * bins));
  return std::clamp(b, 0, bins - 1);
}

}  // namespace

std::vector<long> histogram_counts(const MapParams& p, const HistogramOptions& opt,
                                   const Execution& exec, long* redraws) {
  if (opt.bins < 1) throw std::invalid_argument("histogram_density: bins must be >= 1");
  if (opt.n < 10L * opt.bins) throw std::invalid_argument("histogram_density: n must be >= 10*bins");
  if (opt.burn_in < 0) throw std::invalid_argument("histogram_density: burn_in must be >= 0");
  if (opt.sample_size < 1) throw std::invalid_argument("histogram_density: sample_size must be >= 1");

  const auto n_samples = static_cast<std::size_t>(opt.sample_size);
  constexpr std::size_t chunk = 16;
  const std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
  std::vector<std::vector<long>> partial(n_chunks);
  std::vector<long> chunk_redraws(n_chunks, 0);

  for_each_chunk(n_samples, chunk, exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    std::vector<long> counts(static_cast<std::size_t>(opt.bins), 0);
    std::vector<int> visits(static_cast<std::size_t>(opt.n));
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      for (int attempt = 0;; ++attempt) {
        try {
          double x = rng.uniform_symmetric();
          for (int t = 0; t < opt.burn_in; ++t) x = eval(p, x);
          for (long t = 0; t < opt.n; ++t) {
            x = eval(p, x);
            visits[static_cast<std::size_t>(t)] = bin_of(x, opt.bins);
          }
          break;
        } catch (const SingularityHit&) {
          ++chunk_redraws[c];
          if (attempt + 1 >= kMaxRedraws) throw;
        }
      }
      for (int v : visits) ++counts[static_cast<std::size_t>(v)];
    }
    partial[c] = std::move(counts);
  });

  std::vector<long> counts(static_cast<std::size_t>(opt.bins), 0);
  long total_redraws = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    for (std::size_t b = 0; b < counts.size(); ++b) counts[b] += partial[c][b];
    total_redraws += chunk_redraws[c];
  }
  if (redraws) *redraws = total_redraws;
  return counts;
}

DensityEstimate histogram_density(const MapParams& p, const HistogramOptions& opt, const Execution& exec) {
  long redraws = 0;
  const std::vector<long> counts = histogram_counts(p, opt, exec, &redraws);
  std::vector<double> mass(counts.begin(), counts.end());
  DensityEstimate d(std::move(mass), DensityMethod::histogram);
  d.samples = opt.sample_size;
  d.steps = opt.n;
  d.seed = opt.seed;
  d.redraws = redraws;
  return d;
}

double UlamMatrix::row_sum(int r) const {
  double s = 0.0;
  for (long i = row_start[static_cast<std::size_t>(r)]; i < row_start[static_cast<std::size_t>(r) + 1]; ++i)
    s += value[static_cast<std::size_t>(i)];
  return s;
}

UlamMatrix ulam_matrix(const MapParams& p, int bins, int subdivisions) {
  if (bins < 16) throw std::invalid_argument("ulam_density: bins must be >= 16");
  if (subdivisions < 8) throw std::invalid_argument("ulam_density: subdivisions must be >= 8");

  UlamMatrix m;
  m.bins = bins;
  m.row_start.push_back(0);
  std::vector<double> row(static_cast<std::size_t>(bins), 0.0);
  std::vector<int> touched;
  const double h = 2.0 / bins;

  // Image of [u, v] (same side of 0) with one-sided limits at 0.
  auto image = [&p](double u, double v) {
    const double fu = u == 0.0 ? limit_at_zero(+1) : eval(p, u);
    const double fv = v == 0.0 ? limit_at_zero(-1) : eval(p, v);
    return Interval{std::max(fu, -1.0), std::min(fv, 1.0)};
  };
  auto spread = [&](double weight, Interval img) {
    const double len = img.length();
    if (!(len > 0.0)) {
      const int b = bin_of(img.lo, bins);
      if (row[static_cast<std::size_t>(b)] == 0.0) touched.push_back(b);
      row[static_cast<std::size_t>(b)] += weight;
      return;
    }
    const int first = bin_of(img.lo, bins);
    const int last = bin_of(img.hi, bins);
    for (int b = first; b <= last; ++b) {
      const double lo = std::max(img.lo, -1.0 + b * h);
      const double hi = std::min(img.hi, -1.0 + (b + 1) * h);
      if (hi <= lo) continue;
      if (row[static_cast<std::size_t>(b)] == 0.0) touched.push_back(b);
      row[static_cast<std::size_t>(b)] += weight * (hi - lo) / len;
    }
  };

  for (int i = 0; i < bins; ++i) {
    const double lo = -1.0 + i * h;
    const double piece = h / subdivisions;
    for (int k = 0; k < subdivisions; ++k) {
      const double u = lo + k * piece;
      const double v = k + 1 == subdivisions ? -1.0 + (i + 1) * h : lo + (k + 1) * piece;
      const double w = 1.0 / subdivisions;
      if (u < 0.0 && v > 0.0) {
        spread(w * (-u) / (v - u), image(u, 0.0));
        spread(w * v / (v - u), image(0.0, v));
      } else {
        spread(w, image(u, v));
      }
    }
    std::sort(touched.begin(), touched.end());
    double total = 0.0;
    for (int b : touched) total += row[static_cast<std::size_t>(b)];
    for (int b : touched) {
      m.col.push_back(b);
      m.value.push_back(row[static_cast<std::size_t>(b)] / total);
      row[static_cast<std::size_t>(b)] = 0.0;
    }
    touched.clear();
    m.row_start.push_back(static_cast<long>(m.col.size()));
  }
  return m;
}

namespace {

using SparseRowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor, long>;

SparseRowMajor to_eigen(const UlamMatrix& m) {
  std::vector<Eigen::Triplet<double, long>> triplets;
  triplets.reserve(m.value.size());
  for (int r = 0; r < m.bins; ++r)
    for (long i = m.row_start[static_cast<std::size_t>(r)]; i < m.row_start[static_cast<std::size_t>(r) + 1]; ++i)
      triplets.emplace_back(r, m.col[static_cast<std::size_t>(i)], m.value[static_cast<std::size_t>(i)]);
  SparseRowMajor P(m.bins, m.bins);
  P.setFromTriplets(triplets.begin(), triplets.end());
  return P;
}

}  // namespace

double ulam_residual(const UlamMatrix& m, const DensityEstimate& d) {
  if (d.bins() != m.bins) throw BinMismatch("ulam_residual: bin counts differ");
  const SparseRowMajor P = to_eigen(m);
  const Eigen::Map<const Eigen::VectorXd> v(d.mass().data(), d.bins());
  const Eigen::VectorXd next = P.transpose() * v;
  return (next - v).lpNorm<1>();
}

DensityEstimate ulam_density(const MapParams& p, const UlamOptions& opt) {
  if (opt.max_iter < 1) throw std::invalid_argument("ulam_density: max_iter must be >= 1");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("ulam_density: tol must be positive");
  const UlamMatrix m = ulam_matrix(p, opt.bins, opt.subdivisions);
  const SparseRowMajor P = to_eigen(m);
  const SparseRowMajor Pt = P.transpose();

  Eigen::VectorXd v = Eigen::VectorXd::Constant(opt.bins, 1.0 / opt.bins);
  Eigen::VectorXd next(opt.bins);
  double change = 0.0;
  for (long it = 1; it <= opt.max_iter; ++it) {
    next = Pt * v;
    next /= next.sum();
    change = (next - v).lpNorm<1>();
    v.swap(next);
    if (change < opt.tol) {
      DensityEstimate d(std::vector<double>(v.data(), v.data() + v.size()), DensityMethod::ulam);
      d.iterations = it;
      d.residual = ulam_residual(m, d);
      return d;
    }
  }
  throw NoConvergence(opt.max_iter, change);
}

double l1_distance(const DensityEstimate& a, const DensityEstimate& b) {
  if (a.bins() != b.bins()) throw BinMismatch("l1_distance: bin counts differ");
  double s = 0.0;
  for (int i = 0; i < a.bins(); ++i)
    s += std::fabs(a.mass()[static_cast<std::size_t>(i)] - b.mass()[static_cast<std::size_t>(i)]);
  return s;
}

namespace {

// Integral of (s-1) log x over [u, v], 0 <= u <= v, via x log x - x.
double log_integral(double sm1, double u, double v) {
  auto prim = [](double x) { return x > 0.0 ? x * std::log(x) - x : 0.0; };
  return sm1 * (prim(v) - prim(u));
}

// Average of log f' over magnitudes [0, w], summed over 64 geometric sub-bins.
double singular_average(const MapParams& p, double w) {
  const double sm1 = p.s() - 1.0;
  double integral = 0.0;
  double hi = w;
  for (int k = 0; k < 64; ++k) {
    const double lo = 0.5 * hi;
    integral += log_integral(sm1, lo, hi);
    hi = lo;
  }
  integral += log_integral(sm1, 0.0, hi);
  return p.log_envelope() + integral / w;
}

}  // namespace

double metric_entropy(const MapParams& p, const DensityEstimate& d) {
  double h = 0.0;
  const double width = d.width();
  for (int i = 0; i < d.bins(); ++i) {
    const double m = d.mass()[static_cast<std::size_t>(i)];
    if (m == 0.0) continue;
    const double lo = d.edge(i);
    const double hi = d.edge(i + 1);
    if (lo < 0.0 && hi > 0.0) {
      h += m * ((-lo) / width * singular_average(p, -lo) + hi / width * singular_average(p, hi));
    } else if (lo == 0.0 || hi == 0.0) {
      h += m * singular_average(p, width);
    } else {
      h += m * log_derivative(p, d.center(i));
    }
  }
  return h;
}

DensityEstimate density_from_cdf(int bins, const std::function<double(double)>& cdf) {
  if (bins < 1) throw std::invalid_argument("density_from_cdf: bins must be >= 1");
  std::vector<double> mass(static_cast<std::size_t>(bins));
  for (int i = 0; i < bins; ++i) {
    const double lo = -1.0 + 2.0 * i / bins;
    const double hi = i + 1 == bins ? 1.0 : -1.0 + 2.0 * (i + 1) / bins;
    mass[static_cast<std::size_t>(i)] = std::max(cdf(hi) - cdf(lo), 0.0);
  }
  return DensityEstimate(std::move(mass), DensityMethod::exact);
}

}  // namespace rovella
