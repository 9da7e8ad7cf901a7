#include "rovella/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rovella/errors.hpp"
#include "rovella/fit.hpp"
#include "rovella/orbit.hpp"

namespace rovella {

Observable make_observable(const std::string& name, const MapParams& p) {
  constexpr std::string_view kCoboundary = "coboundary:";
  if (name.starts_with(kCoboundary)) {
    const Observable psi = make_observable(name.substr(kCoboundary.size()), p);
    if (psi.name.starts_with(kCoboundary)) throw std::invalid_argument("nested coboundary observable: " + name);
    auto g = psi.fn;
    return {name, [g, p](double x) { return g(eval(p, x)) - g(x); }, psi.holder_exponent, 2.0 * psi.sup_abs};
  }
  if (name == "identity") return {name, [](double x) { return x; }, 1.0, 1.0};
  if (name == "cos_pi") return {name, [](double x) { return std::cos(M_PI * x); }, 1.0, 1.0};
  if (name == "abs") return {name, [](double x) { return std::fabs(x); }, 1.0, 1.0};
  // Discontinuous at 0; the exponent is metadata only.
  if (name == "indicator_half") return {name, [](double x) { return x >= 0.0 ? 1.0 : 0.0; }, 1.0, 1.0};
  throw std::invalid_argument("unknown observable: " + name);
}

std::vector<std::string> observable_catalog() {
  return {"identity", "cos_pi", "abs", "indicator_half", "coboundary:identity"};
}

namespace {

// Fills out with f^{burn_in}(x), ..., f^{burn_in + out.size() - 1}(x) from a fresh draw,
// redrawing on singularity hits. Returns the number of redraws.
long sample_orbit(const MapParams& p, SampleStream& rng, int burn_in, std::vector<double>& out) {
  for (long attempt = 0;; ++attempt) {
    try {
      double x = rng.uniform_symmetric();
      for (int t = 0; t < burn_in; ++t) x = eval(p, x);
      for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = x;
        if (t + 1 < out.size()) x = eval(p, x);
      }
      return attempt;
    } catch (const SingularityHit&) {
      if (attempt + 1 >= kMaxRedraws) throw;
    }
  }
}

void check_ensemble(const EnsembleOptions& opt, int max_lag) {
  if (opt.sample_size < 2) throw std::invalid_argument("ensemble: sample_size must be >= 2");
  if (opt.burn_in < 0) throw std::invalid_argument("ensemble: burn_in must be >= 0");
  if (max_lag < 0) throw std::invalid_argument("ensemble: lags must be >= 0");
  if (opt.length <= max_lag) throw std::invalid_argument("ensemble: lags must be below the orbit length");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0;
}

}  // namespace

CorrelationCurve correlation_curve(const MapParams& p, const ObservablePair& pair,
                                   const std::vector<int>& n_values, const EnsembleOptions& opt,
                                   const Execution& exec) {
  if (n_values.empty()) throw std::invalid_argument("correlation_curve: empty n range");
  const int max_lag = *std::max_element(n_values.begin(), n_values.end());
  const int min_lag = *std::min_element(n_values.begin(), n_values.end());
  check_ensemble(opt, std::max(max_lag, min_lag < 0 ? -1 : 0));

  const auto n_orbits = static_cast<std::size_t>(opt.sample_size);
  const std::size_t lags = n_values.size();
  const auto window = static_cast<std::size_t>(opt.length - max_lag);
  // Per orbit: window means of phi, psi o f^n and phi * psi o f^n.
  std::vector<double> phi_mean(n_orbits), psi_mean(n_orbits * lags), cross(n_orbits * lags);
  std::vector<long> redraws(n_orbits, 0);

  for_each_chunk(n_orbits, 8, exec, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> orbit(static_cast<std::size_t>(opt.length));
    std::vector<double> phi(window), psi(orbit.size());
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      redraws[i] = sample_orbit(p, rng, opt.burn_in, orbit);
      for (std::size_t t = 0; t < window; ++t) phi[t] = pair.phi(orbit[t]);
      for (std::size_t t = 0; t < orbit.size(); ++t) psi[t] = pair.psi(orbit[t]);
      double sp = 0.0;
      for (double v : phi) sp += v;
      phi_mean[i] = sp / static_cast<double>(window);
      for (std::size_t k = 0; k < lags; ++k) {
        const auto n = static_cast<std::size_t>(n_values[k]);
        double s_psi = 0.0, s_cross = 0.0;
        for (std::size_t t = 0; t < window; ++t) {
          s_psi += psi[t + n];
          s_cross += phi[t] * psi[t + n];
        }
        psi_mean[i * lags + k] = s_psi / static_cast<double>(window);
        cross[i * lags + k] = s_cross / static_cast<double>(window);
      }
    }
  });

  CorrelationCurve out;
  out.n_values = n_values;
  out.redraws = std::accumulate(redraws.begin(), redraws.end(), 0L);
  const double phi_bar = mean_of(phi_mean);
  std::vector<double> influence(n_orbits);
  for (std::size_t k = 0; k < lags; ++k) {
    double psi_bar = 0.0, cross_bar = 0.0;
    for (std::size_t i = 0; i < n_orbits; ++i) {
      psi_bar += psi_mean[i * lags + k];
      cross_bar += cross[i * lags + k];
    }
    psi_bar /= static_cast<double>(n_orbits);
    cross_bar /= static_cast<double>(n_orbits);
    for (std::size_t i = 0; i < n_orbits; ++i)
      influence[i] = cross[i * lags + k] - phi_bar * psi_mean[i * lags + k] - psi_bar * phi_mean[i];
    const double cov = cross_bar - phi_bar * psi_bar;
    out.covariance.push_back(cov);
    out.correlation.push_back(std::fabs(cov));
    out.standard_error.push_back(sd_of(influence) / std::sqrt(static_cast<double>(n_orbits)));
  }

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < lags; ++k) {
    if (out.correlation[k] > kSignificance * out.standard_error[k]) {
      xs.push_back(n_values[k]);
      ys.push_back(out.correlation[k]);
    }
  }
  const ExponentialFit fit = fit_exponential(xs, ys);
  out.fitted_c = fit.c;
  out.fitted_tau = fit.tau;
  out.r_squared = fit.r_squared;
  out.fit_points = fit.points;
  return out;
}

double ensemble_variance(const MapParams& p, const Observable& phi, int max_lag,
                         const EnsembleOptions& opt, const Execution& exec) {
  check_ensemble(opt, max_lag);
  const auto n_orbits = static_cast<std::size_t>(opt.sample_size);
  const auto window = static_cast<std::size_t>(opt.length - max_lag);
  std::vector<double> values(n_orbits * window);
  for_each_chunk(n_orbits, 8, exec, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> orbit(static_cast<std::size_t>(opt.length));
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      sample_orbit(p, rng, opt.burn_in, orbit);
      for (std::size_t t = 0; t < window; ++t) values[i * window + t] = phi(orbit[t]);
    }
  });
  const double m = mean_of(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size());
}

DeviationCurve large_deviation_curve(const MapParams& p, const Observable& phi, double epsilon,
                                     const std::vector<int>& n_values, const DeviationOptions& opt,
                                     const Execution& exec) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("large_deviation_curve: epsilon must be positive");
  if (n_values.empty()) throw std::invalid_argument("large_deviation_curve: empty n range");
  if (*std::min_element(n_values.begin(), n_values.end()) < 1)
    throw std::invalid_argument("large_deviation_curve: n must be >= 1");
  if (opt.sample_size < 1) throw std::invalid_argument("large_deviation_curve: sample_size must be >= 1");
  if (opt.reference_orbits < 1 || opt.reference_length < 1)
    throw std::invalid_argument("large_deviation_curve: reference run must be non-empty");

  DeviationCurve out;
  out.n_values = n_values;

  const DensityEstimate density = histogram_density(p, opt.density, exec);
  for (int b = 0; b < density.bins(); ++b) out.mu_phi += density.mass()[static_cast<std::size_t>(b)] * phi(density.center(b));

  // Long-run Birkhoff mean from unbinned orbit points, on a stream disjoint from the histogram's.
  std::vector<double> ref_sum(static_cast<std::size_t>(opt.reference_orbits), 0.0);
  std::vector<long> ref_redraws(ref_sum.size(), 0);
  for_each_chunk(ref_sum.size(), 1, exec, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> orbit(static_cast<std::size_t>(opt.reference_length));
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(splitmix64(opt.density.seed) + 1, i);
      ref_redraws[i] = sample_orbit(p, rng, opt.density.burn_in, orbit);
      double s = 0.0;
      for (double x : orbit) s += phi(x);
      ref_sum[i] = s;
    }
  });
  const double ref_mean = std::accumulate(ref_sum.begin(), ref_sum.end(), 0.0) /
                          (static_cast<double>(opt.reference_orbits) * opt.reference_length);
  out.epsilon_bias = std::fabs(out.mu_phi - ref_mean);

  std::vector<int> sorted = n_values;
  std::sort(sorted.begin(), sorted.end());
  const int n_max = sorted.back();
  const auto n_samples = static_cast<std::size_t>(opt.sample_size);
  constexpr std::size_t chunk = 64;
  const std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
  std::vector<std::vector<long>> partial(n_chunks, std::vector<long>(n_values.size(), 0));
  std::vector<long> chunk_redraws(n_chunks, 0);

  for_each_chunk(n_samples, chunk, exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    std::vector<double> sums(static_cast<std::size_t>(n_max) + 1);
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      for (int attempt = 0;; ++attempt) {
        try {
          double x = rng.uniform_symmetric();
          double s = 0.0;
          sums[0] = 0.0;
          for (int t = 1; t <= n_max; ++t) {
            s += phi(x);
            sums[static_cast<std::size_t>(t)] = s;
            if (t < n_max) x = eval(p, x);
          }
          break;
        } catch (const SingularityHit&) {
          ++chunk_redraws[c];
          if (attempt + 1 >= kMaxRedraws) throw;
        }
      }
      for (std::size_t k = 0; k < n_values.size(); ++k) {
        const int n = n_values[k];
        if (std::fabs(sums[static_cast<std::size_t>(n)] / n - out.mu_phi) > epsilon) ++partial[c][k];
      }
    }
  });

  out.count.assign(n_values.size(), 0);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    for (std::size_t k = 0; k < n_values.size(); ++k) out.count[k] += partial[c][k];
    out.redraws += chunk_redraws[c];
  }
  out.redraws += std::accumulate(ref_redraws.begin(), ref_redraws.end(), 0L) + density.redraws;
  for (long cnt : out.count) out.fraction.push_back(static_cast<double>(cnt) / opt.sample_size);

  std::vector<double> xs(n_values.begin(), n_values.end());
  const ExponentialFit fit = fit_exponential(xs, out.fraction);
  out.fitted_c = fit.c;
  out.fitted_tau = fit.tau;
  out.r_squared = fit.r_squared;
  out.fit_points = fit.points;
  return out;
}

double ks_normal_distance(std::vector<double> sample, double sigma2) {
  if (sample.empty()) throw std::invalid_argument("ks_normal_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double sigma = std::sqrt(std::max(sigma2, 0.0));
  auto cdf = [sigma](double z) {
    if (sigma == 0.0) return z >= 0.0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-z / (sigma * M_SQRT2));
  };
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

namespace {

struct VarianceScales {
  double mean;
  double sigma2_n;
  double sigma2_4n;
  double sigma2;
};

// Centered by the pooled mean of the given samples, excluding group `skip` of `groups`.
VarianceScales variance_scales(const std::vector<double>& s_n, const std::vector<double>& s_4n, int n,
                               int groups = 1, int skip = -1) {
  const std::size_t size = s_n.size();
  auto kept = [&](std::size_t i) { return skip < 0 || static_cast<int>(i * groups / size) != skip; };
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < size; ++i)
    if (kept(i)) {
      total += s_4n[i];
      ++count;
    }
  const double mean = total / (static_cast<double>(count) * 4.0 * n);
  auto scale_var = [&](const std::vector<double>& s, int len) {
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < size; ++i)
      if (kept(i)) {
        const double z = (s[i] - len * mean) / std::sqrt(static_cast<double>(len));
        m1 += z;
        m2 += z * z;
      }
    m1 /= static_cast<double>(count);
    return m2 / static_cast<double>(count) - m1 * m1;
  };
  const double v_n = scale_var(s_n, n);
  const double v_4n = scale_var(s_4n, 4 * n);
  return {mean, v_n, v_4n, (4.0 * v_4n - v_n) / 3.0};
}

}  // namespace

CltReport clt_report(const MapParams& p, const Observable& phi, int n, const CltOptions& opt,
                     const Execution& exec) {
  if (n < 1000) throw std::invalid_argument("clt_report: n must be >= 1000");
  if (opt.jackknife_groups < 2) throw std::invalid_argument("clt_report: jackknife_groups must be >= 2");
  if (opt.sample_size < 2 * opt.jackknife_groups)
    throw std::invalid_argument("clt_report: sample_size must be >= 2 * jackknife_groups");
  if (opt.burn_in < 0) throw std::invalid_argument("clt_report: burn_in must be >= 0");

  const auto n_samples = static_cast<std::size_t>(opt.sample_size);
  std::vector<double> s_n(n_samples), s_4n(n_samples);
  std::vector<long> redraws(n_samples, 0);
  for_each_chunk(n_samples, 16, exec, [&](std::size_t, std::size_t b, std::size_t e) {
    std::vector<double> orbit(static_cast<std::size_t>(4 * n));
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      redraws[i] = sample_orbit(p, rng, opt.burn_in, orbit);
      double s = 0.0;
      for (std::size_t t = 0; t < orbit.size(); ++t) {
        s += phi(orbit[t]);
        if (t + 1 == static_cast<std::size_t>(n)) s_n[i] = s;
      }
      s_4n[i] = s;
    }
  });

  CltReport r;
  r.n = n;
  r.redraws = std::accumulate(redraws.begin(), redraws.end(), 0L);
  const VarianceScales all = variance_scales(s_n, s_4n, n);
  r.mean = all.mean;
  r.sigma2_n = all.sigma2_n;
  r.sigma2_4n = all.sigma2_4n;
  r.sigma2 = std::max(all.sigma2, 0.0);

  const int g = opt.jackknife_groups;
  std::vector<double> leave_out(static_cast<std::size_t>(g));
  for (int k = 0; k < g; ++k) leave_out[static_cast<std::size_t>(k)] = variance_scales(s_n, s_4n, n, g, k).sigma2;
  const double jk_mean = mean_of(leave_out);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - jk_mean) * (v - jk_mean);
  r.sigma2_se = std::sqrt(static_cast<double>(g - 1) / g * ss);

  std::vector<double> z_n(n_samples), z_4n(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    z_n[i] = (s_n[i] - n * r.mean) / std::sqrt(static_cast<double>(n));
    z_4n[i] = (s_4n[i] - 4.0 * n * r.mean) / std::sqrt(4.0 * n);
  }
  r.ks_distance = ks_normal_distance(std::move(z_n), r.sigma2);
  r.ks_distance_4n = ks_normal_distance(std::move(z_4n), r.sigma2);
  r.berry_esseen_sup = r.ks_distance;
  r.berry_esseen_ratio = r.ks_distance > 0.0 ? r.ks_distance_4n / r.ks_distance : 0.0;
  r.zero_variance = r.sigma2 < kZeroVarianceFloor || r.sigma2 < 3.0 * r.sigma2_se;
  return r;
}

StabilityLadder stability_ladder(const MapParams& base, const std::vector<double>& hs,
                                 const UlamOptions& ulam, const HistogramOptions& hist,
                                 int replicates, const Execution& exec) {
  if (hs.empty()) throw std::invalid_argument("stability_ladder: no rungs");
  if (replicates < 2) throw std::invalid_argument("stability_ladder: replicates must be >= 2");
  for (double h : hs)
    if (!(h > 0.0)) throw std::invalid_argument("stability_ladder: h must be positive");

  StabilityLadder out;
  const DensityEstimate u0 = ulam_density(base, ulam);
  std::vector<DensityEstimate> h0;
  for (int r = 0; r < replicates; ++r) {
    HistogramOptions o = hist;
    o.seed = hist.seed + static_cast<std::uint64_t>(r);
    h0.push_back(histogram_density(base, o, exec));
  }
  for (double h : hs) {
    const MapParams moved = base.with_a(base.a() + h);
    StabilityRung rung;
    rung.a = base.a();
    rung.h = h;
    rung.ulam_distance = l1_distance(u0, ulam_density(moved, ulam));
    for (int r = 0; r < replicates; ++r) {
      HistogramOptions o = hist;
      o.seed = hist.seed + static_cast<std::uint64_t>(r);
      rung.mc_distances.push_back(l1_distance(h0[static_cast<std::size_t>(r)], histogram_density(moved, o, exec)));
    }
    rung.mc_mean = mean_of(rung.mc_distances);
    rung.mc_sd = sd_of(rung.mc_distances);
    out.rungs.push_back(std::move(rung));
  }
  out.decreasing = true;
  for (std::size_t i = 1; i < out.rungs.size(); ++i)
    if (!(out.rungs[i].ulam_distance < out.rungs[i - 1].ulam_distance)) out.decreasing = false;
  return out;
}

}  // namespace rovella
