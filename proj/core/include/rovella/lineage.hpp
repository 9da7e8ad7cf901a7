#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rovella/parallel.hpp"
#include "rovella/partition.hpp"

namespace rovella {

/// Sampled refinement: instead of materializing P_n, follow for each of N uniform points
/// x the element of P_n containing x. Element counts grow like the lap number of f^n, so
/// this is the only way to reach n in the hundreds.
struct LineageOptions {
  int samples = 10'000;
  int horizon = 300;
  std::uint64_t seed = 1;
  StepOptions step;
  Execution exec;
};

struct Lineage {
  std::uint64_t index = 0;
  double x0 = 0.0;
  bool alive = true;
  /// Step at which the element was dropped into the core, or -1.
  int lost_at = -1;
  PartitionElement element;
};

struct LineageRun {
  int horizon = 0;
  std::vector<Lineage> lineages;
  RefinementLog log;
  long redraws = 0;

  /// Lebesgue weight carried by each sample: 2 / N.
  double weight() const { return lineages.empty() ? 0.0 : 2.0 / static_cast<double>(lineages.size()); }
  /// Elements of surviving lineages with their weights.
  std::vector<PartitionElement> alive_elements() const;
  std::map<int, double> depth_frequency(int theta) const;
};

LineageRun trace_lineages(const PartitionContext& ctx, const LineageOptions& opt);

/// P_0 element containing x, or nullopt inside the core.
std::optional<PartitionElement> initial_element(const PartitionContext& ctx, double x);

}  // namespace rovella
