#include "partition_step.hpp"

#include <algorithm>
#include <cmath>

namespace rovella {

double pull_back_point(const MapParams& p, double y, std::span<const std::int8_t> itinerary) {
  for (std::size_t j = itinerary.size(); j-- > 0;) y = inverse_branch(p, y, itinerary[j]);
  return y;
}

Segment pull_back_to(const MapParams& p, Segment s, std::span<const std::int8_t> itinerary, int from,
                     int to) {
  for (int j = from - 1; j >= to; --j) s = pullback_segment(p, s, itinerary[static_cast<std::size_t>(j)]);
  return s;
}

namespace {

void log_doubling(const PartitionContext& ctx, const PartitionElement& e, const Segment& image, int n,
                  const StepOptions& opt, RefinementLog& log) {
  if (!opt.track_doubling || e.returns.empty()) return;
  const ReturnRecord& prev = e.returns.back();
  const Segment earlier = pull_back_to(ctx.params, image, e.itinerary, n, prev.time);
  log.doubling.push_back({prev.time, n, earlier.len, image.len, prev.host.depth()});
}

void record_return(const PartitionContext& ctx, PartitionElement& e, GridIndex host, ReturnKind kind,
                   int n) {
  e.returns.push_back({n, host, kind});
  e.bound_until = n + ctx.bounds(host.m);
  e.state = ElementState::bound;
}

}  // namespace

void apply_piece(const PartitionContext& ctx, PartitionElement& e, const ChopPiece& piece, int n,
                 const StepOptions& opt, RefinementLog& log) {
  if (piece.lone) ++log.lone_fragments;
  if (piece.escaped) {
    e.image = piece.image;
    e.state = ElementState::escaped;
    e.pending_escape = n;
    return;
  }
  log_doubling(ctx, e, piece.image, n, opt, log);
  e.image = piece.image;
  record_return(ctx, e, piece.host, ReturnKind::essential, n);
  ++log.essential_returns;
}

StepResult step_element(const PartitionContext& ctx, PartitionElement& e, int n,
                        std::optional<double> probe, const StepOptions& opt, RefinementLog& log,
                        std::vector<ChopPiece>* pieces) {
  if (e.time() != n - 1) throw InconsistentRecord("step_element: element is not at time n-1");
  if (e.image.lo < 0.0 && e.image.hi() > 0.0)
    throw InconsistentRecord("step_element: image contains the singularity");

  StepResult out;
  const Segment J = forward_segment(ctx.params, e.image);
  out.image = J;
  if (!(J.len > 0.0) || !std::isfinite(J.len) || !std::isfinite(J.lo)) {
    ++log.lost_elements;
    out.situation = Situation::lost;
    return out;
  }

  if (opt.track_distortion) {
    const double r0 = std::exp(-static_cast<double>(ctx.distortion_depth));
    if (J.lo > -r0 && J.hi() < r0) {
      try {
        log.distortion.push_back({n - 1, distortion_ratio(ctx.params, e, opt.distortion_probes)});
      } catch (const SingularityHit&) {
      }
    }
  }

  e.itinerary.push_back(static_cast<std::int8_t>(e.image.lo >= 0.0 ? 1 : -1));
  e.image = J;
  const double y = std::clamp(probe.value_or(J.mid()), J.lo, J.hi());
  out.probe = y;

  const DepthGrid& grid = ctx.grid;
  if (!e.returns.empty() && n <= e.bound_until) {
    if (!J.contains_zero()) {
      out.situation = Situation::bound;
      e.state = ElementState::bound;
      if (y != 0.0 && std::fabs(y) < grid.outer()) {
        e.bound_returns.push_back({n, DepthGrid::depth_of(y)});
        ++log.bound_returns;
      }
      return out;
    }
    ++log.bound_breaks;
  } else if (is_free_image(grid, J)) {
    out.situation = Situation::free;
    if (e.state != ElementState::escaped) e.state = ElementState::free;
    return out;
  }

  // Return situation.
  if (e.pending_escape >= 0) {
    log.escapes.push_back({e.pending_escape, n, J.len});
    e.pending_escape = -1;
  }

  if (covers_full_cell(grid, J) || J.contains_zero()) {
    out.situation = Situation::essential;
    if (pieces) {
      ChopResult chopped = chop(grid, J);
      *pieces = std::move(chopped.pieces);
      return out;
    }
    const auto piece = chop_piece_containing(grid, J, y);
    if (!piece || !(piece->image.len > 0.0)) {
      ++log.lost_elements;
      out.situation = Situation::lost;
      return out;
    }
    apply_piece(ctx, e, *piece, n, opt, log);
    return out;
  }

  const auto host = grid.locate(J.mid());
  if (!host) {
    ++log.lost_elements;
    out.situation = Situation::lost;
    return out;
  }
  log_doubling(ctx, e, J, n, opt, log);
  record_return(ctx, e, *host, ReturnKind::inessential, n);
  ++log.inessential_returns;
  out.situation = Situation::inessential;
  return out;
}

}  // namespace rovella
