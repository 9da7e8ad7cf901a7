#pragma once

#include <compare>
#include <cstdlib>
#include <optional>
#include <vector>

namespace rovella {

/// Closed interval [lo, hi] in absolute coordinates.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Interval stored as a base point and a length. Lengths far below the spacing of
/// doubles near the base point stay accurate because every map acting on a Segment
/// propagates the length through a difference formula instead of hi - lo.
struct Segment {
  double lo = 0.0;
  double len = 0.0;

  double hi() const noexcept { return lo + len; }
  double mid() const noexcept { return lo + 0.5 * len; }
  bool contains_zero() const noexcept { return lo <= 0.0 && hi() >= 0.0; }
};

/// Cell I_{m,k}: sign(m) gives the side, |m| the depth, k in [1, m^2] counts from the
/// outer end of I_m toward 0.
struct GridIndex {
  int m = 0;
  int k = 0;

  int side() const noexcept { return m > 0 ? 1 : -1; }
  int depth() const noexcept { return std::abs(m); }
  friend auto operator<=>(const GridIndex&, const GridIndex&) = default;
};

/// The depth grid {I_{m,k} : Delta <= |m| <= depth_max}. Points with |y| < e^{-depth_max-1}
/// fall in the untracked core around 0.
class DepthGrid {
 public:
  DepthGrid(int delta_big, int depth_max);

  int delta_big() const noexcept { return delta_big_; }
  int depth_max() const noexcept { return depth_max_; }
  /// e^{-Delta}
  double outer() const noexcept { return outer_; }
  /// e^{-depth_max-1}
  double core() const noexcept { return core_; }
  long cells_per_side() const noexcept { return offsets_.back(); }

  /// Magnitudes [lo, hi) of cell (d, k); valid for any depth d >= 1.
  static Interval cell_magnitude(int d, int k);
  /// Signed cell: [lo, hi) for m > 0 and (-hi, -lo] for m < 0, returned as [lo, hi].
  static Interval cell(GridIndex g);
  /// Depth d with |y| in [e^{-d-1}, e^{-d}).
  static int depth_of(double y);

  /// Cell containing y, or nullopt outside U_Delta or inside the core. Gridline ties
  /// go to the cell farther from 0.
  std::optional<GridIndex> locate(double y) const;

  /// Per-side position: 0 is (Delta, 1), increasing toward 0.
  long ordinal(GridIndex g) const;
  GridIndex at_ordinal(int side, long ordinal) const;

  /// I+_{m,k}: the cell with its two neighbours of the same type.
  static Interval host_hull(GridIndex g);
  /// I_{Delta-1,(Delta-1)^2} on the given side: the guard cell an escaping
  /// component must cover.
  Interval escape_guard(int side) const;

 private:
  int delta_big_;
  int depth_max_;
  double outer_;
  double core_;
  std::vector<long> offsets_;  // offsets_[d - delta_big] = cells before depth d
};

}  // namespace rovella
