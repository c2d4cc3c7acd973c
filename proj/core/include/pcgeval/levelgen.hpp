#pragma once

// Deterministic stand-in for the physics evaluator. Blocks fall straight down
// onto a column height map; stability is a center-over-support rule iterated
// to a fixed point. This is a proxy, not a rigid-body simulation.

#include <span>
#include <vector>

#include "pcgeval/core_model.hpp"

namespace pcgeval {

struct SettleOutcome {
  Level level;
  int dropped_out = 0;  // calls rejected as out-of-grid or overflowing the top
};

struct StabilityReport {
  int total_blocks = 0;
  int moving_blocks = 0;
  double sta = 0.0;
  std::vector<int> moving_ids;  // indices into Level::blocks, ascending
};

SettleOutcome settle(std::span<const DropCall> calls, const GridConfig& grid);

// An empty level reports sta = 0.
StabilityReport assess_stability(const Level& level);

}  // namespace pcgeval
