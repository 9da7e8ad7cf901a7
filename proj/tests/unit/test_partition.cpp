#include <gtest/gtest.h>

#include <cmath>
#include <iostream>

#include "rovella/errors.hpp"
#include "rovella/lineage.hpp"
#include "rovella/partition.hpp"

using namespace rovella;

namespace {

const AnalysisConstants kConsts = AnalysisConstants::defaults(1.5);

double pieces_length(const ChopResult& r) {
  double total = r.core_length;
  for (const auto& p : r.pieces) total += p.image.len;
  return total;
}

}  // namespace

TEST(Segments, ForwardMatchesPointwiseAwayFromZero) {
  const MapParams p(0.1);
  const Segment s{0.3, 0.2};
  const Segment f = forward_segment(p, s);
  EXPECT_NEAR(f.lo, eval(p, 0.3), 1e-15);
  EXPECT_NEAR(f.hi(), eval(p, 0.5), 1e-14);
  const Segment back = pullback_segment(p, f, +1);
  EXPECT_NEAR(back.lo, 0.3, 1e-14);
  EXPECT_NEAR(back.len, 0.2, 1e-14);
}

TEST(Segments, TinyLengthsSurviveNearCriticalValue) {
  const MapParams p(0.1);
  const Segment s{std::exp(-30.0), std::exp(-32.0)};
  const Segment f = forward_segment(p, s);
  EXPECT_GT(f.len, 0.0);
  const double expected = p.coeff() * (std::pow(s.hi(), 1.5) - std::pow(s.lo, 1.5));
  EXPECT_NEAR(f.len / expected, 1.0, 1e-9);
}

TEST(Chop, PiecesAreOrderedDisjointAndConserveLength) {
  const DepthGrid g(5, 25);
  for (const Segment J : {Segment{-0.3, 0.5}, Segment{-0.004, 0.02}, Segment{0.001, 0.2}, Segment{-0.5, 0.4995}}) {
    const ChopResult r = chop(g, J);
    ASSERT_FALSE(r.pieces.empty());
    EXPECT_NEAR(pieces_length(r), J.len, 1e-12);
    for (std::size_t i = 1; i < r.pieces.size(); ++i) {
      EXPECT_LE(r.pieces[i - 1].image.hi(), r.pieces[i].image.lo + 1e-15);
      EXPECT_GT(r.pieces[i].image.len, 0.0);
    }
    for (const auto& piece : r.pieces) {
      EXPECT_FALSE(piece.image.lo < 0.0 && piece.image.hi() > 0.0);
      if (!piece.escaped) {
        const Interval hull = DepthGrid::host_hull(piece.host);
        EXPECT_GE(piece.image.lo, hull.lo - 1e-15);
        EXPECT_LE(piece.image.hi(), hull.hi + 1e-15);
      }
      if (!piece.escaped && !piece.lone) {
        const Interval cell = DepthGrid::cell(piece.host);
        EXPECT_LE(piece.image.lo, cell.lo + 1e-15);
        EXPECT_GE(piece.image.hi(), cell.hi - 1e-15);
      }
    }
  }
}

TEST(Chop, PieceContainingAgreesWithFullChop) {
  const DepthGrid g(5, 25);
  SampleStream rng(3, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = -0.05 * rng.uniform01();
    const Segment J{lo, -lo + 0.05 * rng.uniform01()};
    const ChopResult all = chop(g, J);
    for (int q = 0; q < 20; ++q) {
      const double y = J.lo + J.len * rng.uniform01();
      const auto one = chop_piece_containing(g, J, y);
      const ChopPiece* expected = nullptr;
      for (const auto& p : all.pieces)
        if (p.image.lo <= y && y <= p.image.hi()) expected = &p;
      if (!one) {
        EXPECT_LT(std::fabs(y), g.core() * 1.0000001);
        continue;
      }
      ASSERT_NE(expected, nullptr);
      EXPECT_EQ(one->escaped, expected->escaped);
      EXPECT_EQ(one->host, expected->host);
      EXPECT_NEAR(one->image.lo, expected->image.lo, 1e-15);
      EXPECT_NEAR(one->image.len, expected->image.len, 1e-15);
    }
  }
}

TEST(Chop, FreeAndFullCellPredicates) {
  const DepthGrid g(5, 25);
  EXPECT_TRUE(is_free_image(g, Segment{0.1, 0.5}));
  EXPECT_FALSE(is_free_image(g, Segment{-0.1, 0.2}));
  const Interval c = DepthGrid::cell({7, 3});
  EXPECT_TRUE(covers_full_cell(g, Segment{c.lo - 1e-9, c.hi - c.lo + 2e-9}));
  EXPECT_FALSE(covers_full_cell(g, Segment{c.lo + 1e-12, (c.hi - c.lo) * 0.5}));
}

TEST(FullPartition, ElementsTileTheIntervalAndAvoidZero) {
  const PartitionContext ctx(MapParams(0.14), kConsts, 22);
  RefinementLog log;
  const Partition p0 = initial_partition(ctx);
  EXPECT_NEAR(p0.total_length() + 2 * ctx.grid.core(), 2.0, 1e-12);
  const Partition p = build_partition(ctx, 3, 2'000'000, log);
  ASSERT_FALSE(p.truncated);
  EXPECT_EQ(p.n, 3);
  EXPECT_NEAR(p.total_length() + p.lost_length + 2 * ctx.grid.core(), 2.0, 1e-9);
  for (std::size_t i = 0; i < p.elements.size(); ++i) {
    const auto& e = p.elements[i];
    EXPECT_FALSE(e.image.lo < 0.0 && e.image.hi() > 0.0);
    EXPECT_EQ(e.time(), 3);
    if (i > 0) EXPECT_LE(p.elements[i - 1].interval.hi, e.interval.lo + 1e-15);
  }
  EXPECT_EQ(doubling_fraction(log.doubling), 1.0);
}

TEST(FullPartition, StopsAtElementCap) {
  const PartitionContext ctx(MapParams(0.14), kConsts, 22);
  RefinementLog log;
  const Partition p = build_partition(ctx, 10, 5000, log);
  EXPECT_TRUE(p.truncated);
  EXPECT_LT(p.n, 10);
}

TEST(Lineage, DeterministicAcrossWorkers) {
  const PartitionContext ctx(MapParams(0.14), kConsts, 60);
  LineageOptions o;
  o.samples = 500;
  o.horizon = 60;
  o.seed = 9;
  o.step.track_distortion = true;
  const LineageRun a = trace_lineages(ctx, o);
  o.exec = Execution{3};
  const LineageRun b = trace_lineages(ctx, o);
  EXPECT_EQ(a.log.doubling.size(), b.log.doubling.size());
  EXPECT_EQ(a.log.escapes.size(), b.log.escapes.size());
  EXPECT_EQ(a.log.essential_returns, b.log.essential_returns);
  EXPECT_EQ(a.log.distortion.size(), b.log.distortion.size());
  ASSERT_EQ(a.lineages.size(), b.lineages.size());
  for (std::size_t i = 0; i < a.lineages.size(); ++i) {
    EXPECT_EQ(a.lineages[i].x0, b.lineages[i].x0);
    EXPECT_EQ(a.lineages[i].element.image.lo, b.lineages[i].element.image.lo);
  }
}

TEST(Lineage, SampleStaysInsideItsElementImage) {
  const PartitionContext ctx(MapParams(0.14), kConsts, 60);
  LineageOptions o;
  o.samples = 300;
  o.horizon = 40;
  const LineageRun run = trace_lineages(ctx, o);
  EXPECT_DOUBLE_EQ(run.weight(), 2.0 / 300);
  for (const auto& l : run.lineages) {
    if (!l.alive) continue;
    EXPECT_EQ(l.element.time(), 40);
    EXPECT_FALSE(l.element.image.lo < 0.0 && l.element.image.hi() > 0.0);
  }
  EXPECT_EQ(doubling_fraction(run.log.doubling), 1.0);
}

TEST(DepthLedger, InitialRecordCountsAsEssential) {
  PartitionElement e;
  e.returns.push_back({0, {7, 2}, ReturnKind::initial});
  e.returns.push_back({5, {6, 1}, ReturnKind::inessential});
  e.bound_returns.push_back({3, 6});
  e.itinerary.assign(8, 1);
  const DepthLedger l = depth_ledger(e, 8);
  ASSERT_EQ(l.essential_depths.size(), 1u);
  EXPECT_EQ(l.essential_depths[0], 7);
  EXPECT_EQ(l.inessential_sum, 6);
  EXPECT_EQ(l.bound_sum, 6);
  EXPECT_FALSE(l.inessential_exceeds_essential);
}

TEST(DepthLedger, TrailingSumsAndEscapeSizes) {
  const PartitionContext ctx(MapParams(0.14), kConsts, 60);
  LineageOptions o;
  o.samples = 500;
  o.horizon = 300;
  o.seed = 9;
  const LineageRun run = trace_lineages(ctx, o);
  double worst = 0.0;
  int entries = 0;
  for (const auto& l : run.lineages) {
    if (!l.alive) continue;
    const DepthLedger d = depth_ledger(l.element, 300);
    EXPECT_FALSE(d.inessential_exceeds_essential);
    for (const auto& e : d.per_essential) {
      ASSERT_GT(e.depth, 0);
      worst = std::max(worst, static_cast<double>(e.trailing_sum) / e.depth);
      ++entries;
    }
  }
  EXPECT_GT(entries, 0);
  EXPECT_TRUE(std::isfinite(worst));
  const double escape_floor = std::exp(-kConsts.beta * (kConsts.s + 3) * kConsts.delta_big / kConsts.bound_rate());
  EXPECT_FALSE(run.log.escapes.empty());
  for (const auto& e : run.log.escapes) EXPECT_GE(e.length, escape_floor) << "escape at " << e.escape_time;
  std::cout << "max trailing sum / depth over " << entries << " essential returns: " << worst << "\n";
}

TEST(Summaries, DistortionAndDepthDecay) {
  const std::vector<DistortionEvent> ev{{1, 1.2}, {1, 1.5}, {2, 1.4}, {3, 1.3}};
  const DistortionSummary s = summarize_distortion(ev);
  EXPECT_EQ(s.n_values, (std::vector<int>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(s.max_value, 1.5);
  EXPECT_NEAR(s.plateau, (1.5 + 1.4 + 1.3) / 3, 1e-15);
  EXPECT_NEAR(s.fit.slope, -0.1, 1e-12);
  EXPECT_THROW(summarize_distortion(std::vector<DistortionEvent>{{1, 1.0}}), DegenerateFit);

  const std::map<int, double> freq{{5, 1.0}, {6, std::exp(-1.0)}, {7, std::exp(-2.0)}, {8, 0.0}};
  const DepthDecay d = depth_decay(freq, kConsts);
  EXPECT_NEAR(d.fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(d.reference_slope, -(1 - 0.075 * 6.5 / (0.075 + std::log(1.2))), 1e-12);
}
