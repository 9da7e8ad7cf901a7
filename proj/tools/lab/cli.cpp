#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <ostream>

#include "experiments.hpp"
#include "rovella/errors.hpp"
#include "rovella/version.hpp"

namespace rovella::lab {

namespace {

int default_workers(std::ostream& err) {
  const char* env = std::getenv("ROVELLA_LAB_WORKERS");
  if (!env || !*env) return 1;
  try {
    const long v = parse_integer("ROVELLA_LAB_WORKERS", env);
    if (v >= 1 && v <= 4096) return static_cast<int>(v);
  } catch (const ConfigError&) {
  }
  err << "rovella-lab: ignoring invalid ROVELLA_LAB_WORKERS='" << env << "'\n";
  return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Rovella-type interval maps", "rovella-lab"};
  std::string experiment;
  std::string config_path;
  std::vector<std::string> sets;
  int workers = default_workers(err);
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  std::string names;
  for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "One of: " + names)->required();
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--set", sets, "Override a configuration key (key=value)")->take_all();
  app.add_option("--workers", workers, "Parallel workers (default: ROVELLA_LAB_WORKERS or 1)");
  app.add_option("--seed", seed, "Overrides run.seed");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.set_version_flag("--version", kVersion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rovella-lab: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    RunRequest req;
    req.experiment = experiment;
    if (!config_path.empty()) req.config = Config::parse_file(config_path);
    for (const auto& s : sets) req.config.set(s);
    req.workers = workers;
    req.seed = seed;
    if (out_dir) req.output_dir = *out_dir;
    const RunOutcome res = run_experiment(req);
    out << res.summary.string() << "\n";
    for (const auto& f : res.csv_files) out << f.string() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "rovella-lab: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "rovella-lab: invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NoConvergence& e) {
    err << "rovella-lab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateFit& e) {
    err << "rovella-lab: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const SingularityHit& e) {
    err << "rovella-lab: singularity hits exhausted redraws: " << e.what() << "\n";
    return kExitSingularity;
  } catch (const std::exception& e) {
    err << "rovella-lab: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace rovella::lab
