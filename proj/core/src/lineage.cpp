#include "rovella/lineage.hpp"

#include <cmath>
#include <stdexcept>

#include "partition_step.hpp"
#include "rovella/orbit.hpp"

namespace rovella {

std::optional<PartitionElement> initial_element(const PartitionContext& ctx, double x) {
  const DepthGrid& grid = ctx.grid;
  const double d = grid.outer();
  PartitionElement e;
  if (x <= -d) {
    e.interval = {-1.0, -d};
    e.image = {-1.0, 1.0 - d};
    return e;
  }
  if (x >= d) {
    e.interval = {d, 1.0};
    e.image = {d, 1.0 - d};
    return e;
  }
  const auto g = grid.locate(x);
  if (!g) return std::nullopt;
  const Interval c = DepthGrid::cell(*g);
  e.interval = c;
  e.image = {c.lo, c.hi - c.lo};
  e.returns.push_back({0, *g, ReturnKind::initial});
  e.bound_until = ctx.bounds(g->m);
  e.state = ElementState::bound;
  return e;
}

std::vector<PartitionElement> LineageRun::alive_elements() const {
  std::vector<PartitionElement> out;
  for (const Lineage& l : lineages)
    if (l.alive) out.push_back(l.element);
  return out;
}

std::map<int, double> LineageRun::depth_frequency(int theta) const {
  const std::vector<PartitionElement> elements = alive_elements();
  const std::vector<double> weights(elements.size(), weight());
  return rovella::depth_frequency(elements, weights, theta);
}

LineageRun trace_lineages(const PartitionContext& ctx, const LineageOptions& opt) {
  if (opt.samples < 1) throw std::invalid_argument("trace_lineages: samples must be >= 1");
  if (opt.horizon < 1) throw std::invalid_argument("trace_lineages: horizon must be >= 1");

  const auto n_samples = static_cast<std::size_t>(opt.samples);
  constexpr std::size_t chunk = 64;
  const std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
  LineageRun run;
  run.horizon = opt.horizon;
  run.lineages.resize(n_samples);
  std::vector<RefinementLog> logs(n_chunks);
  std::vector<long> redraws(n_chunks, 0);

  for_each_chunk(n_samples, chunk, opt.exec, [&](std::size_t c, std::size_t b, std::size_t e) {
    RefinementLog& log = logs[c];
    for (std::size_t i = b; i < e; ++i) {
      SampleStream rng(opt.seed, i);
      Lineage& lin = run.lineages[i];
      lin.index = i;
      std::optional<PartitionElement> start;
      for (int attempt = 0; !start; ++attempt) {
        if (attempt >= kMaxRedraws) throw SingularityHit(0, 0.0);
        if (attempt > 0) ++redraws[c];
        lin.x0 = rng.uniform_symmetric();
        start = initial_element(ctx, lin.x0);
      }
      lin.element = std::move(*start);

      double y = lin.x0;
      for (int n = 1; n <= opt.horizon; ++n) {
        if (y == 0.0) {
          lin.alive = false;
          lin.lost_at = n;
          ++log.lost_elements;
          break;
        }
        const StepResult step =
            step_element(ctx, lin.element, n, eval(ctx.params, y), opt.step, log, nullptr);
        if (step.situation == Situation::lost) {
          lin.alive = false;
          lin.lost_at = n;
          break;
        }
        y = std::clamp(step.probe, lin.element.image.lo, lin.element.image.hi());
      }
    }
  });

  for (std::size_t c = 0; c < n_chunks; ++c) {
    run.log.append(logs[c]);
    run.redraws += redraws[c];
  }
  return run;
}

}  // namespace rovella
