#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rovella/partition.hpp"

namespace rovella {

enum class Situation { bound, free, inessential, essential, lost };

struct StepResult {
  Situation situation = Situation::free;
  Segment image;  // f^n of the element before any chopping
  double probe = 0.0;
};

/// Pulls y back from time itinerary.size() to time 0.
double pull_back_point(const MapParams& p, double y, std::span<const std::int8_t> itinerary);

/// Pulls a segment back from time `from` to time `to` along the itinerary.
Segment pull_back_to(const MapParams& p, Segment s, std::span<const std::int8_t> itinerary, int from,
                     int to);

/// Advances e from time n-1 to n. `probe` is a point of f^n(e) (clamped into the image);
/// it decides bound returns and, when `pieces` is null, which chopped piece e becomes.
/// With `pieces` non-null an essential situation fills it with every piece and leaves the
/// records of e untouched; the caller then calls apply_piece per child.
StepResult step_element(const PartitionContext& ctx, PartitionElement& e, int n,
                        std::optional<double> probe, const StepOptions& opt, RefinementLog& log,
                        std::vector<ChopPiece>* pieces);

/// Turns e (already advanced to time n) into the child for `piece`.
void apply_piece(const PartitionContext& ctx, PartitionElement& e, const ChopPiece& piece, int n,
                 const StepOptions& opt, RefinementLog& log);

}  // namespace rovella
