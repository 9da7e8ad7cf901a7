#include "rovella/orbit.hpp"

#include <cmath>
#include <stdexcept>

#include "rovella/fit.hpp"

namespace rovella {

namespace {

void require_admissible(double x) {
  if (!(std::fabs(x) <= 1.0)) throw std::invalid_argument("orbit: starting point outside [-1,1]");
}

// Fills `orbit` with f^i(x) for i < len; throws SingularityHit at the first bad iterate.
void fill_orbit(const MapParams& p, double x, int len, std::vector<double>& orbit) {
  orbit.resize(static_cast<std::size_t>(len));
  double y = x;
  for (int i = 0; i < len; ++i) {
    if (std::fabs(y) < kSingularityFloor) throw SingularityHit(i, y);
    orbit[static_cast<std::size_t>(i)] = y;
    if (i + 1 < len) y = eval(p, y);
  }
}

// Shared backward scan: given terms t_i (i < n_max) and a predicate on the running
// average S_n / n, returns the least N with pred true on [N, n_max].
template <class Pred>
HorizonTime stabilization(const std::vector<double>& terms, int n_max, Pred pred,
                          std::vector<double>& prefix) {
  prefix.resize(static_cast<std::size_t>(n_max) + 1);
  prefix[0] = 0.0;
  double s = 0.0;
  for (int i = 0; i < n_max; ++i) {
    s += terms[static_cast<std::size_t>(i)];
    prefix[static_cast<std::size_t>(i) + 1] = s;
  }
  if (!pred(prefix[static_cast<std::size_t>(n_max)] / n_max)) return std::nullopt;
  for (int n = n_max - 1; n >= 1; --n)
    if (!pred(prefix[static_cast<std::size_t>(n)] / n)) return n + 1;
  return 1;
}

struct Scratch {
  std::vector<double> orbit;
  std::vector<double> terms;
  std::vector<double> prefix;
};

HorizonTime expansion_from_orbit(const MapParams& p, const AnalysisConstants& k, int n_max,
                                 Scratch& w) {
  w.terms.resize(static_cast<std::size_t>(n_max));
  for (int i = 0; i < n_max; ++i)
    w.terms[static_cast<std::size_t>(i)] = log_derivative(p, w.orbit[static_cast<std::size_t>(i)]);
  const double c = k.c_exp;
  return stabilization(w.terms, n_max, [c](double avg) { return avg > c; }, w.prefix);
}

HorizonTime recurrence_from_orbit(const AnalysisConstants& k, int n_max, Scratch& w) {
  const double delta = k.recurrence_delta();
  w.terms.resize(static_cast<std::size_t>(n_max));
  for (int i = 0; i < n_max; ++i)
    w.terms[static_cast<std::size_t>(i)] =
        -std::log(truncated_distance(w.orbit[static_cast<std::size_t>(i)], 0.0, delta));
  const double eps = k.epsilon_rec;
  return stabilization(w.terms, n_max, [eps](double avg) { return avg < eps; }, w.prefix);
}

}  // namespace

std::vector<double> iterate(const MapParams& p, double x0, int n) {
  if (n < 0) throw std::invalid_argument("iterate: n must be non-negative");
  require_admissible(x0);
  std::vector<double> orbit;
  fill_orbit(p, x0, n + 1, orbit);
  return orbit;
}

HorizonTime expansion_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max) {
  if (n_max < 1) throw std::invalid_argument("expansion_time: n_max must be >= 1");
  require_admissible(x);
  Scratch w;
  fill_orbit(p, x, n_max, w.orbit);
  return expansion_from_orbit(p, k, n_max, w);
}

HorizonTime recurrence_time(const MapParams& p, double x, const AnalysisConstants& k, int n_max) {
  if (n_max < 1) throw std::invalid_argument("recurrence_time: n_max must be >= 1");
  require_admissible(x);
  Scratch w;
  fill_orbit(p, x, n_max, w.orbit);
  return recurrence_from_orbit(k, n_max, w);
}

StabilizationTimes stabilization_times(const MapParams& p, double x, const AnalysisConstants& k,
                                       int n_max) {
  if (n_max < 1) throw std::invalid_argument("stabilization_times: n_max must be >= 1");
  require_admissible(x);
  Scratch w;
  fill_orbit(p, x, n_max, w.orbit);
  StabilizationTimes t;
  t.expansion = expansion_from_orbit(p, k, n_max, w);
  t.recurrence = recurrence_from_orbit(k, n_max, w);
  return t;
}

std::vector<int> geometric_ladder(int n_max, double ratio) {
  if (n_max < 1) throw std::invalid_argument("geometric_ladder: n_max must be >= 1");
  if (!(ratio > 1.0)) throw std::invalid_argument("geometric_ladder: ratio must exceed 1");
  std::vector<int> ladder;
  for (double v = 1.0; v < n_max; v *= ratio) {
    const int n = static_cast<int>(std::lround(v));
    if (n >= n_max) break;
    if (ladder.empty() || n > ladder.back()) ladder.push_back(n);
  }
  ladder.push_back(n_max);
  return ladder;
}

TailCurve tail_curve(const MapParams& p, const AnalysisConstants& k, int sample_size, int n_max,
                     std::uint64_t seed, const Execution& exec) {
  if (sample_size < 1000) throw std::invalid_argument("tail_curve: sample_size must be >= 1000");
  if (n_max < 50) throw std::invalid_argument("tail_curve: n_max must be >= 50");
  k.validate();

  // Per chunk: histogram of T = max(E, R), with ExceedsHorizon stored as n_max + 1.
  const auto n_samples = static_cast<std::size_t>(sample_size);
  const std::size_t n_chunks = (n_samples + kDefaultChunk - 1) / kDefaultChunk;
  std::vector<std::vector<long>> chunk_hist(n_chunks);
  std::vector<long> chunk_redraws(n_chunks, 0);

  for_each_chunk(n_samples, kDefaultChunk, exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    std::vector<long> hist(static_cast<std::size_t>(n_max) + 2, 0);
    Scratch w;
    long redraws = 0;
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(seed, i);
      for (int attempt = 0;; ++attempt) {
        const double x = rng.uniform_symmetric();
        try {
          fill_orbit(p, x, n_max, w.orbit);
          const HorizonTime te = expansion_from_orbit(p, k, n_max, w);
          const HorizonTime tr = recurrence_from_orbit(k, n_max, w);
          const int t = std::max(te.value_or(n_max + 1), tr.value_or(n_max + 1));
          ++hist[static_cast<std::size_t>(t)];
          break;
        } catch (const SingularityHit&) {
          ++redraws;
          if (attempt + 1 >= kMaxRedraws) throw;
        }
      }
    }
    chunk_hist[c] = std::move(hist);
    chunk_redraws[c] = redraws;
  });

  std::vector<long> hist(static_cast<std::size_t>(n_max) + 2, 0);
  TailCurve curve;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    for (std::size_t t = 0; t < hist.size(); ++t) hist[t] += chunk_hist[c][t];
    curve.redraws += chunk_redraws[c];
  }

  // above[n] = #{T > n}
  std::vector<long> above(hist.size(), 0);
  long acc = 0;
  for (std::size_t t = hist.size(); t-- > 0;) {
    above[t] = acc;
    acc += hist[t];
  }

  curve.sample_size = sample_size;
  curve.seed = seed;
  curve.n_values = geometric_ladder(n_max);
  std::vector<double> xs, ys;
  for (int n : curve.n_values) {
    const long count = above[static_cast<std::size_t>(n)];
    const double frac = static_cast<double>(count) / sample_size;
    curve.gamma_count.push_back(count);
    curve.gamma_fraction.push_back(frac);
    if (count > 0) {
      xs.push_back(n);
      ys.push_back(frac);
    } else {
      curve.fit_truncated = true;
    }
  }
  const ExponentialFit fit = fit_exponential(xs, ys);
  curve.fitted_c = fit.c;
  curve.fitted_tau = fit.tau;
  curve.r_squared = fit.r_squared;
  curve.fit_points = fit.points;
  return curve;
}

double deep_approach_fraction(const MapParams& p, int sample_size, int n, double alpha,
                              std::uint64_t seed, const Execution& exec) {
  if (n < 1) throw std::invalid_argument("deep_approach_fraction: n must be >= 1");
  if (sample_size < 1) throw std::invalid_argument("deep_approach_fraction: sample_size must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("deep_approach_fraction: alpha must be positive");
  const double radius = std::exp(-alpha * n);
  if (radius < kSingularityFloor) return 0.0;

  const auto n_samples = static_cast<std::size_t>(sample_size);
  std::vector<long> hits((n_samples + kDefaultChunk - 1) / kDefaultChunk, 0);
  for_each_chunk(n_samples, kDefaultChunk, exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    long count = 0;
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(seed, i);
      double y = rng.uniform_symmetric();
      for (int step = 1; step <= n; ++step) {
        if (y == 0.0) break;  // no forward orbit from the singularity
        y = eval(p, y);
        if (std::fabs(y) <= radius) {
          ++count;
          break;
        }
      }
    }
    hits[c] = count;
  });
  long total = 0;
  for (long h : hits) total += h;
  return static_cast<double>(total) / sample_size;
}

}  // namespace rovella
