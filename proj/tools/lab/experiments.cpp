#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <set>

#include "output.hpp"
#include "rovella/bound_period.hpp"
#include "rovella/density.hpp"
#include "rovella/lineage.hpp"
#include "rovella/orbit.hpp"
#include "rovella/parameter_lab.hpp"
#include "rovella/partition.hpp"
#include "rovella/statistics.hpp"
#include "rovella/version.hpp"

namespace rovella::lab {

using json = nlohmann::json;

namespace {

struct Results {
  json scalars = json::object();
  std::vector<Table> tables;
};

struct Context {
  const Settings& s;
  MapParams params;
  AnalysisConstants consts;
  std::uint64_t seed;
  Execution exec;
};

using Runner = std::function<Results(const Context&)>;

std::vector<KeySpec> common_keys() {
  return {
      {"experiment", KeyKind::text, ""},
      {"output_dir", KeyKind::text, "."},
      {"map.a", KeyKind::real, "0.1"},
      {"map.s", KeyKind::real, "1.5"},
      {"map.a_max", KeyKind::real, "0.5"},
      {"consts.lambda_c", KeyKind::real, "1.2"},
      {"consts.alpha", KeyKind::real, "0.05"},
      {"consts.delta", KeyKind::integer, "5"},
      {"consts.theta", KeyKind::integer, "auto"},
      {"consts.epsilon_rec", KeyKind::real, "0.1"},
      {"consts.c_exp", KeyKind::real, "auto"},
      {"run.seed", KeyKind::integer, "1"},
  };
}

std::vector<KeySpec> certify_keys() {
  return {
      {"run.horizon", KeyKind::integer, "1000"},
      {"run.eps_fa", KeyKind::real, "0.1"},
      {"run.coverage_bins", KeyKind::integer, "64"},
      {"run.coverage_threshold", KeyKind::real, "0.9"},
      {"run.require_c4", KeyKind::flag, "false"},
  };
}

std::vector<KeySpec> ulam_keys() {
  return {
      {"run.bins", KeyKind::integer, "1024"},
      {"run.subdivisions", KeyKind::integer, "32"},
      {"run.tol", KeyKind::real, "1e-10"},
      {"run.max_iter", KeyKind::integer, "100000"},
  };
}

std::vector<KeySpec> histogram_keys() {
  return {
      {"run.burn_in", KeyKind::integer, "1000"},
      {"run.n", KeyKind::integer, "20000"},
      {"run.sample_size", KeyKind::integer, "1000"},
  };
}

std::vector<KeySpec> scan_range_keys() {
  return {
      {"run.a_lo", KeyKind::real, "0.01"},
      {"run.a_hi", KeyKind::real, "0.2"},
      {"run.grid", KeyKind::integer, "20"},
  };
}

CertifyOptions certify_options(const Settings& s) {
  CertifyOptions o;
  o.horizon = s.small_integer("run.horizon");
  o.eps_fa = s.real("run.eps_fa");
  o.coverage_bins = s.small_integer("run.coverage_bins");
  o.coverage_threshold = s.real("run.coverage_threshold");
  o.require_c4 = s.flag("run.require_c4");
  if (o.horizon < 100) throw ConfigError("run.horizon must be >= 100");
  if (!(o.eps_fa > 0.0 && o.eps_fa < 1.0)) throw ConfigError("run.eps_fa must lie in (0, 1)");
  if (o.coverage_bins < 1) throw ConfigError("run.coverage_bins must be >= 1");
  return o;
}

UlamOptions ulam_options(const Settings& s) {
  UlamOptions o;
  o.bins = s.small_integer("run.bins");
  o.subdivisions = s.small_integer("run.subdivisions");
  o.tol = s.real("run.tol");
  o.max_iter = s.integer("run.max_iter");
  return o;
}

HistogramOptions histogram_options(const Context& c) {
  HistogramOptions o;
  o.burn_in = c.s.small_integer("run.burn_in");
  o.n = c.s.integer("run.n");
  o.sample_size = c.s.small_integer("run.sample_size");
  o.bins = c.s.small_integer("run.bins");
  o.seed = c.seed;
  return o;
}

json report_json(const CertificationReport& r) {
  return {{"param_a", r.param_a},         {"horizon", r.horizon},       {"c2_margin", r.c2_margin},
          {"c3_margin", r.c3_margin},     {"fa_fraction", r.fa_fraction}, {"coverage", r.coverage},
          {"free_time", r.free_time},     {"bound_time", r.bound_time},  {"c4_ok", r.c4_ok},
          {"certified", r.certified},     {"reason", r.reason}};
}

std::vector<std::string> report_header() {
  return {"a", "certified", "c2_margin", "c3_margin", "fa_fraction", "coverage", "free_time", "bound_time", "c4_ok"};
}

std::vector<Cell> report_row(const CertificationReport& r) {
  return {r.param_a,     static_cast<long long>(r.certified), r.c2_margin, r.c3_margin, r.fa_fraction,
          r.coverage,    static_cast<long long>(r.free_time), static_cast<long long>(r.bound_time),
          static_cast<long long>(r.c4_ok)};
}

// ---------------------------------------------------------------------------

Results run_validate(const Context& c) {
  const int grid = c.s.small_integer("run.grid");
  if (grid < 16) throw ConfigError("run.grid must be >= 16");
  const ValidationReport v = validate_params(c.params, grid);
  Results r;
  r.scalars = {{"k1", v.k1},
               {"k2", v.k2},
               {"schwarzian_max", v.schwarzian_max},
               {"monotone_ok", v.monotone_ok},
               {"limits_ok", v.limits_ok},
               {"notes", v.notes}};
  Table t{"profile", {"x", "f", "log_derivative", "schwarzian"}, {}};
  for (int i = -grid; i <= grid; ++i) {
    if (i == 0) continue;
    const double x = static_cast<double>(i) / grid;
    t.rows.push_back({x, eval(c.params, x), log_derivative(c.params, x), schwarzian(c.params, x)});
  }
  r.tables.push_back(std::move(t));
  return r;
}

Results run_tail(const Context& c) {
  const TailCurve t = tail_curve(c.params, c.consts, c.s.small_integer("run.sample_size"),
                                 c.s.small_integer("run.n_max"), c.seed, c.exec);
  Results r;
  r.scalars = {{"fitted_c", t.fitted_c},         {"fitted_tau", t.fitted_tau}, {"r_squared", t.r_squared},
               {"fit_points", t.fit_points},     {"fit_truncated", t.fit_truncated},
               {"sample_size", t.sample_size},   {"redraws", t.redraws}};
  Table curve{"curve", {"n", "gamma_fraction", "fit_c", "fit_tau", "r2"}, {}};
  for (std::size_t i = 0; i < t.n_values.size(); ++i)
    curve.rows.push_back({static_cast<long long>(t.n_values[i]), t.gamma_fraction[i], t.fitted_c, t.fitted_tau, t.r_squared});
  r.tables.push_back(std::move(curve));
  return r;
}

Results run_partition(const Context& c) {
  const std::string mode = c.s.text("run.mode");
  if (mode != "lineage" && mode != "full") throw ConfigError("run.mode must be lineage or full");
  const int n = c.s.small_integer("run.n");
  if (n < 1) throw ConfigError("run.n must be >= 1");
  const PartitionContext ctx(c.params, c.consts, c.s.small_integer("run.depth_max"));
  StepOptions step;
  step.track_distortion = c.s.flag("run.track_distortion");
  step.distortion_probes = c.s.small_integer("run.distortion_probes");

  Results r;
  RefinementLog log;
  std::map<int, double> frequency;
  if (mode == "lineage") {
    LineageOptions o;
    o.samples = c.s.small_integer("run.samples");
    o.horizon = n;
    o.seed = c.seed;
    o.step = step;
    o.exec = c.exec;
    LineageRun run = trace_lineages(ctx, o);
    log = std::move(run.log);
    frequency = run.depth_frequency(c.consts.theta);
    long alive = 0;
    for (const auto& l : run.lineages) alive += l.alive ? 1 : 0;
    r.scalars["samples"] = o.samples;
    r.scalars["alive"] = alive;
    r.scalars["redraws"] = run.redraws;
    r.scalars["steps_reached"] = n;
  } else {
    const auto cap = static_cast<std::size_t>(c.s.integer("run.element_cap"));
    const Partition part = build_partition(ctx, n, cap, log, step);
    frequency = depth_frequency(part, c.consts.theta);
    r.scalars["elements"] = part.elements.size();
    r.scalars["total_length"] = part.total_length();
    r.scalars["lost_length"] = part.lost_length;
    r.scalars["truncated"] = part.truncated;
    r.scalars["steps_reached"] = part.n;
  }
  r.scalars["mode"] = mode;
  r.scalars["distortion_depth"] = ctx.distortion_depth;
  r.scalars["doubling_pairs"] = log.doubling.size();
  r.scalars["doubling_fraction"] = doubling_fraction(log.doubling);
  r.scalars["escapes"] = log.escapes.size();
  r.scalars["distortion_events"] = log.distortion.size();
  r.scalars["bound_breaks"] = log.bound_breaks;
  r.scalars["lone_fragments"] = log.lone_fragments;
  r.scalars["lost_elements"] = log.lost_elements;
  r.scalars["bound_returns"] = log.bound_returns;
  r.scalars["essential_returns"] = log.essential_returns;
  r.scalars["inessential_returns"] = log.inessential_returns;

  Table doubling{"doubling", {"z", "z_star", "length_z", "length_z_star", "depth", "holds"}, {}};
  for (const auto& d : log.doubling)
    doubling.rows.push_back({static_cast<long long>(d.z), static_cast<long long>(d.z_star), d.length_z, d.length_z_star,
                             static_cast<long long>(d.depth), static_cast<long long>(d.holds())});
  r.tables.push_back(std::move(doubling));

  Table distortion{"distortion", {"n", "max_ratio"}, {}};
  if (log.distortion.size() > 0) {
    std::map<int, double> by_n;
    for (const auto& d : log.distortion) by_n[d.n] = std::max(by_n[d.n], d.ratio);
    for (const auto& [t, ratio] : by_n) distortion.rows.push_back({static_cast<long long>(t), ratio});
    if (by_n.size() >= 2) {
      const DistortionSummary sum = summarize_distortion(log.distortion);
      r.scalars["distortion_slope"] = sum.fit.slope;
      r.scalars["distortion_slope_upper95"] = sum.slope_upper95;
      r.scalars["distortion_plateau"] = sum.plateau;
      r.scalars["distortion_max"] = sum.max_value;
    }
  }
  r.tables.push_back(std::move(distortion));

  Table depth{"depth_frequency", {"depth", "weight"}, {}};
  for (const auto& [d, w] : frequency) depth.rows.push_back({static_cast<long long>(d), w});
  r.tables.push_back(std::move(depth));
  if (std::count_if(frequency.begin(), frequency.end(), [](const auto& kv) { return kv.second > 0.0; }) >= 2) {
    const DepthDecay decay = depth_decay(frequency, c.consts);
    r.scalars["depth_slope"] = decay.fit.slope;
    r.scalars["depth_slope_r2"] = decay.fit.r_squared;
    r.scalars["depth_reference_slope"] = decay.reference_slope;
  }

  Table bounds{"bound_periods", {"m", "p", "lower", "upper"}, {}};
  for (int m = c.consts.delta_big; m <= c.consts.delta_big + 20; ++m) {
    const BoundPeriodEnvelope env = bound_period_envelope(c.params, c.consts, m);
    bounds.rows.push_back({static_cast<long long>(m), static_cast<long long>(ctx.bounds(m)), env.lower, env.upper});
  }
  r.tables.push_back(std::move(bounds));
  return r;
}

Results run_certify(const Context& c) {
  const CertificationReport rep = certify(c.params, c.consts, certify_options(c.s));
  Results r;
  r.scalars = report_json(rep);
  Table t{"report", report_header(), {report_row(rep)}};
  r.tables.push_back(std::move(t));
  return r;
}

Results run_scan(const Context& c) {
  const ScanResult res = scan(c.s.real("run.a_lo"), c.s.real("run.a_hi"), c.s.small_integer("run.grid"), c.params.s(),
                              c.consts, certify_options(c.s), c.exec);
  Results r;
  long certified = 0;
  for (const auto& rep : res.reports) certified += rep.certified ? 1 : 0;
  r.scalars = {{"grid", res.reports.size()},
               {"certified", certified},
               {"certified_fraction", res.density.empty() ? 0.0 : res.density.back().certified_fraction}};
  Table reports{"reports", report_header(), {}};
  for (const auto& rep : res.reports) reports.rows.push_back(report_row(rep));
  Table density{"density", {"a", "certified_fraction"}, {}};
  for (const auto& d : res.density) density.rows.push_back({d.a, d.certified_fraction});
  r.tables.push_back(std::move(reports));
  r.tables.push_back(std::move(density));
  return r;
}

Results run_density(const Context& c) {
  const std::string method = c.s.text("run.method");
  if (method != "both" && method != "ulam" && method != "histogram")
    throw ConfigError("run.method must be both, ulam or histogram");
  std::optional<DensityEstimate> ulam, hist;
  if (method != "histogram") ulam = ulam_density(c.params, ulam_options(c.s));
  if (method != "ulam") hist = histogram_density(c.params, histogram_options(c), c.exec);

  Results r;
  r.scalars["method"] = method;
  const DensityEstimate& any = ulam ? *ulam : *hist;
  if (ulam) {
    const UlamMatrix m = ulam_matrix(c.params, ulam->bins(), c.s.small_integer("run.subdivisions"));
    double worst = 0.0;
    for (int row = 0; row < m.bins; ++row) worst = std::max(worst, std::fabs(m.row_sum(row) - 1.0));
    r.scalars["ulam_iterations"] = ulam->iterations;
    r.scalars["ulam_residual"] = ulam->residual;
    r.scalars["ulam_row_deviation"] = worst;
    r.scalars["ulam_entropy"] = metric_entropy(c.params, *ulam);
  }
  if (hist) {
    r.scalars["histogram_redraws"] = hist->redraws;
    r.scalars["histogram_entropy"] = metric_entropy(c.params, *hist);
  }
  if (ulam && hist) r.scalars["l1_distance"] = l1_distance(*ulam, *hist);

  std::vector<std::string> header{"center"};
  if (hist) header.push_back("histogram");
  if (ulam) header.push_back("ulam");
  Table t{"mass", header, {}};
  for (int b = 0; b < any.bins(); ++b) {
    std::vector<Cell> row{any.center(b)};
    if (hist) row.emplace_back(hist->mass()[static_cast<std::size_t>(b)]);
    if (ulam) row.emplace_back(ulam->mass()[static_cast<std::size_t>(b)]);
    t.rows.push_back(std::move(row));
  }
  r.tables.push_back(std::move(t));
  return r;
}

Results run_stability(const Context& c) {
  const StabilityLadder ladder = stability_ladder(c.params, c.s.reals("run.hs"), ulam_options(c.s), histogram_options(c),
                                                  c.s.small_integer("run.replicates"), c.exec);
  Results r;
  r.scalars["decreasing"] = ladder.decreasing;
  Table t{"ladder", {"a", "h", "ulam_l1", "mc_mean", "mc_sd"}, {}};
  for (const auto& rung : ladder.rungs) t.rows.push_back({rung.a, rung.h, rung.ulam_distance, rung.mc_mean, rung.mc_sd});
  r.tables.push_back(std::move(t));
  return r;
}

Results run_correlations(const Context& c) {
  const int n_max = c.s.small_integer("run.n_max");
  if (n_max < 2) throw ConfigError("run.n_max must be >= 2");
  std::vector<int> ns;
  for (int n = 0; n <= n_max; ++n) ns.push_back(n);
  EnsembleOptions o;
  o.sample_size = c.s.small_integer("run.sample_size");
  o.burn_in = c.s.small_integer("run.burn_in");
  o.length = c.s.small_integer("run.length");
  o.seed = c.seed;
  const ObservablePair pair{make_observable(c.s.text("run.phi"), c.params), make_observable(c.s.text("run.psi"), c.params)};
  const CorrelationCurve cc = correlation_curve(c.params, pair, ns, o, c.exec);
  Results r;
  r.scalars = {{"fitted_c", cc.fitted_c},   {"fitted_tau", cc.fitted_tau}, {"r_squared", cc.r_squared},
               {"fit_points", cc.fit_points}, {"redraws", cc.redraws},
               {"phi_holder_exponent", pair.phi.holder_exponent}, {"psi_holder_exponent", pair.psi.holder_exponent}};
  Table t{"curve", {"n", "covariance", "correlation", "standard_error"}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i)
    t.rows.push_back({static_cast<long long>(ns[i]), cc.covariance[i], cc.correlation[i], cc.standard_error[i]});
  r.tables.push_back(std::move(t));
  return r;
}

Results run_deviations(const Context& c) {
  const int lo = c.s.small_integer("run.n_min");
  const int hi = c.s.small_integer("run.n_max");
  const int step = c.s.small_integer("run.n_step");
  if (lo < 1 || hi < lo || step < 1) throw ConfigError("need 1 <= run.n_min <= run.n_max and run.n_step >= 1");
  std::vector<int> ns;
  for (int n = lo; n <= hi; n += step) ns.push_back(n);
  DeviationOptions o;
  o.sample_size = c.s.small_integer("run.samples");
  o.seed = c.seed;
  o.density = histogram_options(c);
  o.reference_orbits = c.s.small_integer("run.reference_orbits");
  o.reference_length = c.s.small_integer("run.reference_length");
  const Observable phi = make_observable(c.s.text("run.phi"), c.params);
  const DeviationCurve d = large_deviation_curve(c.params, phi, c.s.real("run.epsilon"), ns, o, c.exec);
  Results r;
  r.scalars = {{"mu_phi", d.mu_phi},     {"epsilon_bias", d.epsilon_bias}, {"fitted_c", d.fitted_c},
               {"fitted_tau", d.fitted_tau}, {"r_squared", d.r_squared},   {"fit_points", d.fit_points},
               {"redraws", d.redraws}};
  Table t{"curve", {"n", "count", "fraction"}, {}};
  for (std::size_t i = 0; i < ns.size(); ++i)
    t.rows.push_back({static_cast<long long>(ns[i]), static_cast<long long>(d.count[i]), d.fraction[i]});
  r.tables.push_back(std::move(t));
  return r;
}

Results run_clt(const Context& c) {
  CltOptions o;
  o.sample_size = c.s.small_integer("run.sample_size");
  o.burn_in = c.s.small_integer("run.burn_in");
  o.jackknife_groups = c.s.small_integer("run.jackknife_groups");
  o.seed = c.seed;
  const Observable phi = make_observable(c.s.text("run.phi"), c.params);
  const CltReport rep = clt_report(c.params, phi, c.s.small_integer("run.n"), o, c.exec);
  Results r;
  r.scalars = {{"n", rep.n},
               {"mean", rep.mean},
               {"sigma2", rep.sigma2},
               {"sigma2_se", rep.sigma2_se},
               {"sigma2_n", rep.sigma2_n},
               {"sigma2_4n", rep.sigma2_4n},
               {"ks_distance", rep.ks_distance},
               {"ks_distance_4n", rep.ks_distance_4n},
               {"berry_esseen_sup", rep.berry_esseen_sup},
               {"berry_esseen_ratio", rep.berry_esseen_ratio},
               {"zero_variance", rep.zero_variance},
               {"redraws", rep.redraws}};
  Table t{"scales", {"n", "sigma2_at_n", "ks_distance"}, {}};
  t.rows.push_back({static_cast<long long>(rep.n), rep.sigma2_n, rep.ks_distance});
  t.rows.push_back({static_cast<long long>(4 * rep.n), rep.sigma2_4n, rep.ks_distance_4n});
  r.tables.push_back(std::move(t));
  return r;
}

Results run_entropy(const Context& c) {
  const std::vector<double> grid = scan_grid(c.s.real("run.a_lo"), c.s.real("run.a_hi"), c.s.small_integer("run.grid"));
  const UlamOptions o = ulam_options(c.s);
  Results r;
  Table t{"curve", {"a", "entropy", "ulam_iterations", "ulam_residual"}, {}};
  double lo = INFINITY, hi = -INFINITY;
  for (double a : grid) {
    const MapParams p(a, c.params.s(), std::max(c.params.a_max(), a));
    const DensityEstimate d = ulam_density(p, o);
    const double h = metric_entropy(p, d);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
    t.rows.push_back({a, h, static_cast<long long>(d.iterations), d.residual});
  }
  r.scalars = {{"entropy_min", lo}, {"entropy_max", hi}, {"points", grid.size()}};
  r.tables.push_back(std::move(t));
  return r;
}

struct Experiment {
  std::vector<KeySpec> keys;
  Runner run;
};

std::vector<KeySpec> concat(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

const std::map<std::string, Experiment>& registry() {
  static const std::map<std::string, Experiment> r = {
      {"validate", {{{"run.grid", KeyKind::integer, "1000"}}, run_validate}},
      {"tail", {{{"run.sample_size", KeyKind::integer, "100000"}, {"run.n_max", KeyKind::integer, "500"}}, run_tail}},
      {"partition",
       {{{"run.mode", KeyKind::text, "lineage"},
         {"run.n", KeyKind::integer, "300"},
         {"run.samples", KeyKind::integer, "10000"},
         {"run.depth_max", KeyKind::integer, "60"},
         {"run.element_cap", KeyKind::integer, "1000000"},
         {"run.track_distortion", KeyKind::flag, "true"},
         {"run.distortion_probes", KeyKind::integer, "9"}},
        run_partition}},
      {"certify", {certify_keys(), run_certify}},
      {"scan", {concat({certify_keys(), scan_range_keys()}), run_scan}},
      {"density", {concat({ulam_keys(), histogram_keys(), {{"run.method", KeyKind::text, "both"}}}), run_density}},
      {"stability",
       {concat({ulam_keys(), histogram_keys(),
                {{"run.hs", KeyKind::real_list, "0.04,0.02,0.01"}, {"run.replicates", KeyKind::integer, "4"}}}),
        run_stability}},
      {"correlations",
       {{{"run.phi", KeyKind::text, "identity"},
         {"run.psi", KeyKind::text, "identity"},
         {"run.n_max", KeyKind::integer, "30"},
         {"run.sample_size", KeyKind::integer, "1000"},
         {"run.burn_in", KeyKind::integer, "1000"},
         {"run.length", KeyKind::integer, "20000"}},
        run_correlations}},
      {"deviations",
       {concat({histogram_keys(),
                {{"run.bins", KeyKind::integer, "1024"},
                 {"run.phi", KeyKind::text, "identity"},
                 {"run.epsilon", KeyKind::real, "0.1"},
                 {"run.n_min", KeyKind::integer, "10"},
                 {"run.n_max", KeyKind::integer, "300"},
                 {"run.n_step", KeyKind::integer, "10"},
                 {"run.samples", KeyKind::integer, "10000"},
                 {"run.reference_orbits", KeyKind::integer, "100"},
                 {"run.reference_length", KeyKind::integer, "100000"}}}),
        run_deviations}},
      {"clt",
       {{{"run.phi", KeyKind::text, "identity"},
         {"run.n", KeyKind::integer, "2000"},
         {"run.sample_size", KeyKind::integer, "10000"},
         {"run.burn_in", KeyKind::integer, "1000"},
         {"run.jackknife_groups", KeyKind::integer, "20"}},
        run_clt}},
      {"entropy", {concat({ulam_keys(), scan_range_keys()}), run_entropy}},
  };
  return r;
}

const Experiment& lookup(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw ConfigError("unknown experiment '" + name + "'");
  return it->second;
}

AnalysisConstants constants_from(const Settings& s, double map_s) {
  ConstantsSpec spec;
  spec.lambda_c = s.real("consts.lambda_c");
  spec.alpha = s.real("consts.alpha");
  spec.delta_big = s.small_integer("consts.delta");
  if (!s.is_auto("consts.theta")) spec.theta = s.small_integer("consts.theta");
  if (!s.is_auto("consts.epsilon_rec")) spec.epsilon_rec = s.real("consts.epsilon_rec");
  if (!s.is_auto("consts.c_exp")) spec.c_exp = s.real("consts.c_exp");
  return resolve_constants(spec, map_s);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, e] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

std::vector<KeySpec> experiment_schema(const std::string& experiment) {
  std::vector<KeySpec> keys = common_keys();
  keys.front().fallback = experiment;
  const auto& extra = lookup(experiment).keys;
  keys.insert(keys.end(), extra.begin(), extra.end());
  return keys;
}

RunOutcome run_experiment(const RunRequest& request) {
  const Experiment& exp = lookup(request.experiment);
  Config config = request.config;
  if (const auto it = config.entries().find("experiment"); it != config.entries().end() && it->second != request.experiment)
    throw ConfigError("config names experiment '" + it->second + "' but '" + request.experiment + "' was requested");
  if (request.seed) config.set("run.seed", std::to_string(*request.seed));
  if (request.output_dir) config.set("output_dir", request.output_dir->string());
  if (request.workers < 1) throw ConfigError("workers must be >= 1");

  const Settings settings(config, experiment_schema(request.experiment));
  const long seed = settings.integer("run.seed");
  if (seed < 0) throw ConfigError("run.seed must be >= 0");
  const MapParams params(settings.real("map.a"), settings.real("map.s"), settings.real("map.a_max"));
  const Context ctx{settings, params, constants_from(settings, params.s()), static_cast<std::uint64_t>(seed),
                    Execution{request.workers}};

  Results results = exp.run(ctx);

  // Everything is checked before the first byte is written.
  std::set<std::string> names;
  for (const auto& t : results.tables) {
    check_table(t);
    if (!names.insert(t.name).second || t.name == "summary")
      throw std::logic_error("experiment " + request.experiment + " emits table '" + t.name + "' twice");
  }

  const std::filesystem::path dir = settings.text("output_dir");
  std::filesystem::create_directories(dir);
  RunOutcome out;
  json files = json::array();
  for (const auto& t : results.tables) {
    emit_csv(dir, request.experiment, t);
    out.csv_files.push_back(csv_path(dir, request.experiment, t.name));
    files.push_back(csv_path({}, request.experiment, t.name).string());
  }

  json summary = {{"experiment", request.experiment},
                  {"version", kVersion},
                  {"seed", seed},
                  {"workers", request.workers},
                  {"config", settings.values()},
                  {"results", results.scalars},
                  {"files", files}};
  out.summary = dir / (request.experiment + "_summary.json");
  write_file(out.summary, summary.dump(2) + "\n");
  return out;
}

}  // namespace rovella::lab
