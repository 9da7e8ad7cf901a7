#include "rovella/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rovella {

namespace {

GridIndex outer_neighbour(GridIndex g) {
  const int d = g.depth();
  if (g.k > 1) return {g.m, g.k - 1};
  return {g.side() * (d - 1), (d - 1) * (d - 1)};
}

GridIndex inner_neighbour(GridIndex g) {
  const int d = g.depth();
  if (g.k < d * d) return {g.m, g.k + 1};
  return {g.side() * (d + 1), 1};
}

}  // namespace

DepthGrid::DepthGrid(int delta_big, int depth_max)
    : delta_big_(delta_big),
      depth_max_(depth_max),
      outer_(std::exp(-static_cast<double>(delta_big))),
      core_(std::exp(-static_cast<double>(depth_max) - 1.0)) {
  if (delta_big < 2) throw std::invalid_argument("grid: delta_big must be >= 2");
  if (depth_max < delta_big) throw std::invalid_argument("grid: depth_max must be >= delta_big");
  if (depth_max > 600) throw std::invalid_argument("grid: depth_max must be <= 600");
  offsets_.push_back(0);
  for (int d = delta_big; d <= depth_max; ++d)
    offsets_.push_back(offsets_.back() + static_cast<long>(d) * d);
}

Interval DepthGrid::cell_magnitude(int d, int k) {
  const double hi_ring = std::exp(-static_cast<double>(d));
  const double lo_ring = std::exp(-static_cast<double>(d) - 1.0);
  const int cells = d * d;
  const double width = (hi_ring - lo_ring) / cells;
  const double hi = k == 1 ? hi_ring : hi_ring - (k - 1) * width;
  const double lo = k == cells ? lo_ring : hi_ring - k * width;
  return {lo, hi};
}

Interval DepthGrid::cell(GridIndex g) {
  const Interval u = cell_magnitude(g.depth(), g.k);
  if (g.m > 0) return u;
  return {-u.hi, -u.lo};
}

int DepthGrid::depth_of(double y) {
  const double a = std::fabs(y);
  int d = static_cast<int>(std::ceil(-std::log(a))) - 1;
  // Correct the floating estimate against the exact ring boundaries.
  while (d > 0 && a >= std::exp(-static_cast<double>(d))) --d;
  while (a < std::exp(-static_cast<double>(d) - 1.0)) ++d;
  return d;
}

std::optional<GridIndex> DepthGrid::locate(double y) const {
  const double a = std::fabs(y);
  if (!(a < outer_) || a < core_) return std::nullopt;
  const int d = std::clamp(depth_of(a), delta_big_, depth_max_);
  const int cells = d * d;
  const double hi_ring = std::exp(-static_cast<double>(d));
  const double lo_ring = std::exp(-static_cast<double>(d) - 1.0);
  const double width = (hi_ring - lo_ring) / cells;
  int k = static_cast<int>(std::floor((hi_ring - a) / width)) + 1;
  k = std::clamp(k, 1, cells);
  while (k < cells && cell_magnitude(d, k).lo > a) ++k;
  while (k > 1 && cell_magnitude(d, k).hi <= a) --k;
  return GridIndex{y > 0.0 ? d : -d, k};
}

long DepthGrid::ordinal(GridIndex g) const {
  const int d = g.depth();
  if (d < delta_big_ || d > depth_max_) throw std::out_of_range("grid: depth outside grid");
  return offsets_[static_cast<std::size_t>(d - delta_big_)] + (g.k - 1);
}

GridIndex DepthGrid::at_ordinal(int side, long ordinal) const {
  if (ordinal < 0 || ordinal >= cells_per_side()) throw std::out_of_range("grid: ordinal outside grid");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), ordinal);
  const int d = delta_big_ + static_cast<int>(it - offsets_.begin()) - 1;
  const int k = static_cast<int>(ordinal - offsets_[static_cast<std::size_t>(d - delta_big_)]) + 1;
  return {side > 0 ? d : -d, k};
}

Interval DepthGrid::host_hull(GridIndex g) {
  const Interval outer = cell_magnitude(outer_neighbour(g).depth(), outer_neighbour(g).k);
  const Interval inner = cell_magnitude(inner_neighbour(g).depth(), inner_neighbour(g).k);
  if (g.m > 0) return {inner.lo, outer.hi};
  return {-outer.hi, -inner.lo};
}

Interval DepthGrid::escape_guard(int side) const {
  const int d = delta_big_ - 1;
  const Interval u = cell_magnitude(d, d * d);
  if (side > 0) return u;
  return {-u.hi, -u.lo};
}

}  // namespace rovella
