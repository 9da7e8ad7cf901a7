#include "rovella/partition.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "partition_step.hpp"
#include "rovella/errors.hpp"

namespace rovella {

// ---------------------------------------------------------------------------
// Segment maps

Segment forward_segment(const MapParams& p, const Segment& s) {
  const double c = p.coeff();
  const double sp = p.s();
  if (s.lo >= 0.0) {
    if (s.lo == 0.0) return {-1.0, c * std::pow(s.len, sp)};
    const double base = c * std::pow(s.lo, sp);
    return {-1.0 + base, base * std::expm1(sp * std::log1p(s.len / s.lo))};
  }
  const double a = -s.lo;
  const double base = c * std::pow(a, sp);
  const double ratio = std::min(s.len / a, 1.0);
  return {1.0 - base, -base * std::expm1(sp * std::log1p(-ratio))};
}

Segment pullback_segment(const MapParams& p, const Segment& s, int side) {
  const double c = p.coeff();
  const double inv = 1.0 / p.s();
  if (side > 0) {
    const double u = s.lo + 1.0;
    if (u <= 0.0) return {0.0, std::pow(std::max(s.hi() + 1.0, 0.0) / c, inv)};
    const double x = std::pow(u / c, inv);
    return {x, x * std::expm1(inv * std::log1p(s.len / u))};
  }
  const double w = 1.0 - s.lo;
  const double base = std::pow(w / c, inv);
  const double ratio = std::min(s.len / w, 1.0);
  return {-base, -base * std::expm1(inv * std::log1p(-ratio))};
}

// ---------------------------------------------------------------------------
// Chopping

namespace {

// Grid cells of one side that meet J = [a, b], by ordinal from `first` (outermost)
// to `last` (innermost), together with the escaping-component status on that side.
struct SideRun {
  int side = 1;
  bool present = false;
  long first = 0;
  long last = 0;
  bool first_full = false;
  bool last_full = false;
  bool omega = false;
  bool omega_escapes = false;

  bool full(long q) const { return q == first ? first_full : (q == last ? last_full : true); }
  bool any_full() const { return present && (last - first >= 2 || first_full || last_full); }
};

bool covered(const Interval& cell, double a, double b) { return a <= cell.lo && b >= cell.hi; }

SideRun make_run(const DepthGrid& grid, double a, double b, int side) {
  SideRun r;
  r.side = side;
  const double d = grid.outer();
  const double core = grid.core();
  const long inner = grid.cells_per_side() - 1;
  if (side < 0) {
    r.omega = a < -d;
    r.omega_escapes = r.omega && a <= grid.escape_guard(-1).lo;
    if (a <= -core && b > -d) {
      r.present = true;
      r.first = a <= -d ? 0 : grid.ordinal(*grid.locate(a));
      r.last = b >= -core ? inner : grid.ordinal(*grid.locate(b));
    }
  } else {
    r.omega = b > d;
    r.omega_escapes = r.omega && b >= grid.escape_guard(1).hi;
    if (b >= core && a < d) {
      r.present = true;
      r.first = b >= d ? 0 : grid.ordinal(*grid.locate(b));
      r.last = a < core ? inner : grid.ordinal(*grid.locate(a));
    }
  }
  if (r.present) {
    r.first_full = covered(DepthGrid::cell(grid.at_ordinal(side, r.first)), a, b);
    r.last_full = covered(DepthGrid::cell(grid.at_ordinal(side, r.last)), a, b);
  }
  return r;
}

struct Group {
  long lo = 0;  // outermost ordinal
  long hi = 0;  // innermost ordinal
};

Group group_around_full(const SideRun& r, long o) {
  Group g{o, o};
  if (o - 1 == r.first && !r.first_full) g.lo = r.first;
  if (o + 1 == r.last && !r.last_full) g.hi = r.last;
  return g;
}

// Partial end cells join their full neighbour; without any full cell every piece
// stands alone.
Group group_of(const SideRun& r, long o) {
  if (!r.any_full()) return {o, o};
  if (!r.full(o)) return group_around_full(r, o == r.first ? r.first + 1 : r.last - 1);
  return group_around_full(r, o);
}

ChopPiece make_group_piece(const DepthGrid& grid, const SideRun& r, Group g, double a, double b) {
  const Interval outer = DepthGrid::cell(grid.at_ordinal(r.side, g.lo));
  const Interval inner = DepthGrid::cell(grid.at_ordinal(r.side, g.hi));
  const bool attach = r.omega && !r.omega_escapes && g.lo == 0;
  double lo, hi;
  if (r.side < 0) {
    lo = attach ? a : std::max(a, outer.lo);
    hi = std::min(b, inner.hi);
  } else {
    lo = std::max(a, inner.lo);
    hi = attach ? b : std::min(b, outer.hi);
  }
  ChopPiece piece;
  piece.image = {lo, std::max(hi - lo, 0.0)};
  piece.lone = true;
  piece.host = grid.at_ordinal(r.side, g.lo);
  for (long q = g.lo; q <= g.hi; ++q) {
    if (r.full(q) && r.any_full()) {
      piece.host = grid.at_ordinal(r.side, q);
      piece.lone = false;
      break;
    }
  }
  return piece;
}

ChopPiece omega_piece(const DepthGrid& grid, int side, double a, double b, bool escaped) {
  ChopPiece piece;
  const double d = grid.outer();
  piece.image = side < 0 ? Segment{a, -d - a} : Segment{d, b - d};
  piece.host = {side * grid.delta_big(), 1};
  piece.escaped = escaped;
  piece.lone = !escaped;
  return piece;
}

}  // namespace

ChopResult chop(const DepthGrid& grid, const Segment& J) {
  const double a = J.lo;
  const double b = J.hi();
  const SideRun neg = make_run(grid, a, b, -1);
  const SideRun pos = make_run(grid, a, b, 1);
  ChopResult out;
  auto emit = [&out](const ChopPiece& piece) {
    if (piece.image.len > 0.0) out.pieces.push_back(piece);
  };

  if (neg.omega && (neg.omega_escapes || !neg.present))
    emit(omega_piece(grid, -1, a, b, neg.omega_escapes));
  if (neg.present) {
    for (long o = neg.first; o <= neg.last;) {
      const Group g = group_of(neg, o);
      emit(make_group_piece(grid, neg, g, a, b));
      o = g.hi + 1;
    }
  }
  const double core = grid.core();
  if (a < core && b > -core) out.core_length = std::min(b, core) - std::max(a, -core);
  if (pos.present) {
    for (long o = pos.last; o >= pos.first;) {
      const Group g = group_of(pos, o);
      emit(make_group_piece(grid, pos, g, a, b));
      o = g.lo - 1;
    }
  }
  if (pos.omega && (pos.omega_escapes || !pos.present))
    emit(omega_piece(grid, 1, a, b, pos.omega_escapes));
  return out;
}

std::optional<ChopPiece> chop_piece_containing(const DepthGrid& grid, const Segment& J, double y) {
  const double a = J.lo;
  const double b = J.hi();
  y = std::clamp(y, a, b);
  const double d = grid.outer();
  const double core = grid.core();
  if (-core < y && y < core) return std::nullopt;
  const int side = y > 0.0 ? 1 : -1;
  const SideRun run = make_run(grid, a, b, side);
  if (std::fabs(y) >= d) {
    if (run.omega_escapes || !run.present) return omega_piece(grid, side, a, b, run.omega_escapes);
    return make_group_piece(grid, run, group_of(run, 0), a, b);
  }
  const long o = grid.ordinal(*grid.locate(y));
  return make_group_piece(grid, run, group_of(run, o), a, b);
}

bool is_free_image(const DepthGrid& grid, const Segment& J) {
  if (J.contains_zero()) return false;
  const double edge = DepthGrid::cell_magnitude(grid.delta_big(), 1).lo;
  if (J.lo > 0.0) return J.lo >= edge;
  return J.hi() <= -edge;
}

bool covers_full_cell(const DepthGrid& grid, const Segment& J) {
  const double a = J.lo;
  const double b = J.hi();
  return make_run(grid, a, b, -1).any_full() || make_run(grid, a, b, 1).any_full();
}

// ---------------------------------------------------------------------------
// Context and logs

PartitionContext::PartitionContext(const MapParams& p, const AnalysisConstants& k, int depth_max)
    : params(p),
      consts(k),
      grid(k.delta_big, depth_max),
      bounds(p, k, depth_max + 20),
      distortion_depth(k.distortion_depth()) {}

void RefinementLog::append(const RefinementLog& other) {
  doubling.insert(doubling.end(), other.doubling.begin(), other.doubling.end());
  escapes.insert(escapes.end(), other.escapes.begin(), other.escapes.end());
  distortion.insert(distortion.end(), other.distortion.begin(), other.distortion.end());
  bound_breaks += other.bound_breaks;
  lone_fragments += other.lone_fragments;
  lost_elements += other.lost_elements;
  bound_returns += other.bound_returns;
  essential_returns += other.essential_returns;
  inessential_returns += other.inessential_returns;
}

// ---------------------------------------------------------------------------
// Element measurements

double distortion_ratio(const MapParams& p, const PartitionElement& e, int probes) {
  if (probes < 2) throw std::invalid_argument("distortion_ratio: probes must be >= 2");
  if (e.image.lo < 0.0 && e.image.hi() > 0.0)
    throw InconsistentRecord("distortion_ratio: image contains 0");
  const double sm1 = p.s() - 1.0;
  std::vector<double> offset(static_cast<std::size_t>(probes));
  std::vector<double> sum(static_cast<std::size_t>(probes), 0.0);
  for (int i = 0; i < probes; ++i)
    offset[static_cast<std::size_t>(i)] = e.image.len * i / (probes - 1);

  double base = e.image.lo;
  auto accumulate = [&] {
    if (base == 0.0) throw SingularityHit(e.time(), base);
    for (std::size_t i = 0; i < offset.size(); ++i) sum[i] += sm1 * std::log1p(offset[i] / base);
  };
  accumulate();
  for (int j = e.time() - 1; j >= 0; --j) {
    const int side = e.itinerary[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < offset.size(); ++i)
      offset[i] = pullback_segment(p, {base, offset[i]}, side).len;
    base = pullback_segment(p, {base, 0.0}, side).lo;
    accumulate();
  }
  const auto [lo, hi] = std::minmax_element(sum.begin(), sum.end());
  return std::exp(*hi - *lo);
}

DepthLedger depth_ledger(const PartitionElement& e, int n) {
  DepthLedger ledger;
  int current = -1;  // index into per_essential
  std::size_t b = 0;
  auto flush_bound = [&](int until) {
    for (; b < e.bound_returns.size() && e.bound_returns[b].time <= until; ++b) {
      const int depth = e.bound_returns[b].depth;
      ledger.bound_sum += depth;
      if (current >= 0) ledger.per_essential[static_cast<std::size_t>(current)].trailing_sum += depth;
    }
  };
  for (const ReturnRecord& r : e.returns) {
    if (r.time > n) break;
    flush_bound(r.time);
    const int depth = r.host.depth();
    if (r.kind == ReturnKind::inessential) {
      ledger.inessential_sum += depth;
      if (current >= 0) {
        auto& entry = ledger.per_essential[static_cast<std::size_t>(current)];
        entry.trailing_sum += depth;
        if (depth > entry.depth) ledger.inessential_exceeds_essential = true;
      }
    } else {
      ledger.essential_depths.push_back(depth);
      ledger.per_essential.push_back({depth, 0});
      current = static_cast<int>(ledger.per_essential.size()) - 1;
    }
  }
  flush_bound(n);
  return ledger;
}

std::map<int, double> depth_frequency(std::span<const PartitionElement> elements,
                                      std::span<const double> weights, int theta) {
  if (elements.size() != weights.size())
    throw std::invalid_argument("depth_frequency: weights must match elements");
  std::map<int, double> freq;
  std::set<int> seen;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    seen.clear();
    for (const ReturnRecord& r : elements[i].returns)
      if (r.kind == ReturnKind::essential && r.time >= 1 && r.host.depth() >= theta)
        seen.insert(r.host.depth());
    for (int m : seen) freq[m] += weights[i];
  }
  return freq;
}

std::map<int, double> depth_frequency(const Partition& partition, int theta) {
  std::vector<double> weights;
  weights.reserve(partition.elements.size());
  for (const auto& e : partition.elements) weights.push_back(e.interval.length());
  return depth_frequency(partition.elements, weights, theta);
}

// ---------------------------------------------------------------------------
// Materialized partition

double Partition::total_length() const {
  double total = 0.0;
  for (const auto& e : elements) total += e.interval.length();
  return total;
}

Partition initial_partition(const PartitionContext& ctx) {
  const DepthGrid& grid = ctx.grid;
  const double d = grid.outer();
  Partition part;
  auto add_cell = [&](GridIndex g) {
    PartitionElement e;
    const Interval c = DepthGrid::cell(g);
    e.interval = c;
    e.image = {c.lo, c.hi - c.lo};
    e.returns.push_back({0, g, ReturnKind::initial});
    e.bound_until = ctx.bounds(g.m);
    e.state = ElementState::bound;
    part.elements.push_back(std::move(e));
  };

  PartitionElement left;
  left.interval = {-1.0, -d};
  left.image = {-1.0, 1.0 - d};
  part.elements.push_back(left);
  for (long o = 0; o < grid.cells_per_side(); ++o) add_cell(grid.at_ordinal(-1, o));
  for (long o = grid.cells_per_side(); o-- > 0;) add_cell(grid.at_ordinal(1, o));
  PartitionElement right;
  right.interval = {d, 1.0};
  right.image = {d, 1.0 - d};
  part.elements.push_back(right);
  part.lost_length = 2.0 * grid.core();
  return part;
}

Partition refine(const Partition& previous, const PartitionContext& ctx, int n, RefinementLog& log,
                 const StepOptions& opt) {
  if (n != previous.n + 1) throw InconsistentRecord("refine: step must follow the input partition");
  Partition next;
  next.n = n;
  next.lost_length = previous.lost_length;
  next.elements.reserve(previous.elements.size());

  std::vector<ChopPiece> pieces;
  for (const PartitionElement& parent : previous.elements) {
    PartitionElement e = parent;
    const StepResult step = step_element(ctx, e, n, std::nullopt, opt, log, &pieces);
    switch (step.situation) {
      case Situation::lost:
        next.lost_length += parent.interval.length();
        break;
      case Situation::essential: {
        const Segment J = step.image;
        double cursor = parent.interval.lo;
        double kept = 0.0;
        for (const ChopPiece& piece : pieces) {
          PartitionElement child = e;
          double lo = piece.image.lo <= J.lo ? parent.interval.lo
                                             : pull_back_point(ctx.params, piece.image.lo, e.itinerary);
          double hi = piece.image.hi() >= J.hi()
                          ? parent.interval.hi
                          : pull_back_point(ctx.params, piece.image.hi(), e.itinerary);
          lo = std::clamp(lo, cursor, parent.interval.hi);
          hi = std::clamp(hi, lo, parent.interval.hi);
          cursor = hi;
          child.interval = {lo, hi};
          child.birth = n;
          apply_piece(ctx, child, piece, n, opt, log);
          kept += child.interval.length();
          next.elements.push_back(std::move(child));
        }
        next.lost_length += std::max(parent.interval.length() - kept, 0.0);
        break;
      }
      default:
        next.elements.push_back(std::move(e));
        break;
    }
  }
  return next;
}

Partition build_partition(const PartitionContext& ctx, int n_part, std::size_t element_cap,
                          RefinementLog& log, const StepOptions& opt) {
  Partition part = initial_partition(ctx);
  for (int n = 1; n <= n_part; ++n) {
    RefinementLog step_log;
    Partition next = refine(part, ctx, n, step_log, opt);
    if (next.elements.size() > element_cap) {
      part.truncated = true;
      break;
    }
    log.append(step_log);
    part = std::move(next);
  }
  return part;
}

// ---------------------------------------------------------------------------
// Run summaries

double doubling_fraction(std::span<const DoublingEvent> events) {
  if (events.empty()) return 1.0;
  long held = 0;
  for (const auto& d : events) held += d.holds() ? 1 : 0;
  return static_cast<double>(held) / static_cast<double>(events.size());
}

DistortionSummary summarize_distortion(std::span<const DistortionEvent> events) {
  std::map<int, double> by_n;
  for (const auto& d : events) {
    auto [it, fresh] = by_n.try_emplace(d.n, d.ratio);
    if (!fresh) it->second = std::max(it->second, d.ratio);
  }
  if (by_n.size() < 2) throw DegenerateFit("distortion summary: fewer than 2 distinct times", static_cast<int>(by_n.size()));
  DistortionSummary out;
  std::vector<double> xs;
  for (const auto& [n, r] : by_n) {
    out.n_values.push_back(n);
    xs.push_back(n);
    out.max_ratio.push_back(r);
    out.max_value = std::max(out.max_value, r);
    out.plateau += r;
  }
  out.plateau /= static_cast<double>(by_n.size());
  out.fit = fit_line(xs, out.max_ratio);
  out.slope_upper95 = out.fit.slope + 1.645 * out.fit.slope_se;
  return out;
}

DepthDecay depth_decay(const std::map<int, double>& frequency, const AnalysisConstants& k) {
  DepthDecay out;
  std::vector<double> xs, ys;
  for (const auto& [d, w] : frequency) {
    out.depths.push_back(d);
    out.weights.push_back(w);
    if (w > 0.0) {
      xs.push_back(d);
      ys.push_back(std::log(w));
    }
  }
  if (xs.size() < 2) throw DegenerateFit("depth decay: fewer than 2 weighted depths", static_cast<int>(xs.size()));
  out.fit = fit_line(xs, ys);
  out.reference_slope = -(1.0 - k.beta * (k.s + 5.0) / k.bound_rate());
  return out;
}

}  // namespace rovella
