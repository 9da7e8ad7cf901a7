#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rovella/bound_period.hpp"
#include "rovella/constants.hpp"
#include "rovella/fit.hpp"
#include "rovella/grid.hpp"
#include "rovella/map.hpp"

namespace rovella {

// ---------------------------------------------------------------------------
// Segment maps

/// f applied to a segment that does not contain 0 in its interior.
Segment forward_segment(const MapParams& p, const Segment& s);
/// Inverse branch on side sign(side) applied to a segment of [-1,1].
Segment pullback_segment(const MapParams& p, const Segment& s, int side);

// ---------------------------------------------------------------------------
// Records

enum class ReturnKind : std::uint8_t { initial, essential, inessential };
enum class ElementState : std::uint8_t { free, bound, escaped };

struct ReturnRecord {
  int time = 0;
  GridIndex host;
  ReturnKind kind = ReturnKind::initial;
};

struct BoundReturn {
  int time = 0;
  int depth = 0;
};

/// One partition element of P_n.
struct PartitionElement {
  /// Original coordinates. Left empty in lineage mode.
  Interval interval;
  /// f^n(element)
  Segment image;
  /// Returns (R_n fused with Q_n); a P_0 grid cell carries an initial record at time 0.
  std::vector<ReturnRecord> returns;
  std::vector<BoundReturn> bound_returns;
  /// Sign of f^j(element) for j < n.
  std::vector<std::int8_t> itinerary;
  ElementState state = ElementState::free;
  int bound_until = 0;
  int birth = 0;
  /// Time of an escape still waiting for its next return situation, or -1.
  int pending_escape = -1;

  int time() const noexcept { return static_cast<int>(itinerary.size()); }
};

// ---------------------------------------------------------------------------
// Chopping an image at an essential return situation

struct ChopPiece {
  Segment image;
  GridIndex host;
  bool escaped = false;
  /// Covers no full cell and had no full neighbour to join.
  bool lone = false;
};

struct ChopResult {
  std::vector<ChopPiece> pieces;  // left to right
  double core_length = 0.0;       // image length inside the untracked core
};

/// Decomposes J into omega_-, grid pieces and omega_+ as in the inductive construction.
ChopResult chop(const DepthGrid& grid, const Segment& J);
/// The piece of chop(grid, J) containing y, computed without enumerating the others.
/// nullopt when y lies in the core.
std::optional<ChopPiece> chop_piece_containing(const DepthGrid& grid, const Segment& J, double y);

/// True when J meets U_Delta only inside I_{Delta,1} or I_{-Delta,1}.
bool is_free_image(const DepthGrid& grid, const Segment& J);
/// True when J covers at least one whole grid cell.
bool covers_full_cell(const DepthGrid& grid, const Segment& J);

// ---------------------------------------------------------------------------
// Context and diagnostics

struct PartitionContext {
  PartitionContext(const MapParams& p, const AnalysisConstants& k, int depth_max);

  MapParams params;
  AnalysisConstants consts;
  DepthGrid grid;
  BoundPeriodTable bounds;
  /// Delta_0: distortion is measured on elements whose next image lies in U_{Delta_0}.
  int distortion_depth;
};

struct DoublingEvent {
  int z = 0;
  int z_star = 0;
  double length_z = 0.0;
  double length_z_star = 0.0;
  int depth = 0;
  bool holds() const noexcept { return length_z_star >= 2.0 * length_z; }
};

struct EscapeEvent {
  int escape_time = 0;
  int return_time = 0;
  double length = 0.0;
};

struct DistortionEvent {
  int n = 0;
  double ratio = 1.0;
};

struct RefinementLog {
  std::vector<DoublingEvent> doubling;
  std::vector<EscapeEvent> escapes;
  std::vector<DistortionEvent> distortion;
  long bound_breaks = 0;
  long lone_fragments = 0;
  long lost_elements = 0;
  long bound_returns = 0;
  long essential_returns = 0;
  long inessential_returns = 0;

  void append(const RefinementLog& other);
};

struct StepOptions {
  bool track_distortion = false;
  int distortion_probes = 9;
  bool track_doubling = true;
};

// ---------------------------------------------------------------------------
// Materialized partition

struct Partition {
  int n = 0;
  std::vector<PartitionElement> elements;
  /// Refinement stopped at an element cap before reaching the requested step.
  bool truncated = false;
  /// Original-coordinate length dropped into the core so far.
  double lost_length = 0.0;

  double total_length() const;
};

/// P_0 = {[-1,-delta], [delta,1]} and every grid cell, sorted by left endpoint.
Partition initial_partition(const PartitionContext& ctx);

/// P_{n-1} -> P_n.
Partition refine(const Partition& previous, const PartitionContext& ctx, int n, RefinementLog& log,
                 const StepOptions& opt = {});

/// Refines P_0 up to n_part or until the element cap would be exceeded.
Partition build_partition(const PartitionContext& ctx, int n_part, std::size_t element_cap,
                          RefinementLog& log, const StepOptions& opt = {});

// ---------------------------------------------------------------------------
// Element-level measurements

/// max over probe pairs of (f^{n+1})'(x)/(f^{n+1})'(y) for x, y in the element, where the
/// element's current image is f^n. Uses differences of log-derivative sums along offsets.
double distortion_ratio(const MapParams& p, const PartitionElement& e, int probes);

struct EssentialEntry {
  int depth = 0;
  int trailing_sum = 0;
};

struct DepthLedger {
  std::vector<int> essential_depths;
  long inessential_sum = 0;
  long bound_sum = 0;
  std::vector<EssentialEntry> per_essential;
  /// Inessential depth exceeding its preceding essential depth was seen.
  bool inessential_exceeds_essential = false;
};

/// Splits the history up to time n into essential returns and their trailing
/// inessential and bound-return depths. Initial (time 0) records count as essential.
DepthLedger depth_ledger(const PartitionElement& e, int n);

/// depth m -> total weight of elements whose history has an essential return (time >= 1)
/// at depth m >= theta.
std::map<int, double> depth_frequency(std::span<const PartitionElement> elements,
                                      std::span<const double> weights, int theta);
std::map<int, double> depth_frequency(const Partition& partition, int theta);

// ---------------------------------------------------------------------------
// Run summaries

/// Fraction of logged consecutive-return pairs satisfying the doubling inequality; 1 when none.
double doubling_fraction(std::span<const DoublingEvent> events);

struct DistortionSummary {
  std::vector<int> n_values;
  std::vector<double> max_ratio;
  /// Least-squares line through (n, max ratio at n).
  LinearFit fit;
  /// One-sided 95% upper bound slope + 1.645 se; infinite with fewer than 3 distinct n.
  double slope_upper95 = 0.0;
  /// Mean of the per-n maxima, the empirical distortion constant.
  double plateau = 0.0;
  double max_value = 0.0;
};

/// Groups events by n. Throws DegenerateFit when fewer than 2 distinct n were logged.
DistortionSummary summarize_distortion(std::span<const DistortionEvent> events);

struct DepthDecay {
  std::vector<int> depths;
  std::vector<double> weights;
  /// Fit of log weight against depth over the positive entries.
  LinearFit fit;
  /// -(1 - beta (s+5) / (beta + log lambda_c)).
  double reference_slope = 0.0;
};

/// Throws DegenerateFit when fewer than 2 depths carry weight.
DepthDecay depth_decay(const std::map<int, double>& frequency, const AnalysisConstants& k);

}  // namespace rovella
