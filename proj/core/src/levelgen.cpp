#include "pcgeval/levelgen.hpp"

#include <algorithm>
#include <limits>

namespace pcgeval {
namespace {

struct Contact {
  std::size_t supporter;
  int first_col;  // overlap of the two column spans, inclusive
  int last_col;
};

std::vector<std::vector<Contact>> find_contacts(const Level& level) {
  const auto& blocks = level.blocks;
  std::vector<std::vector<Contact>> contacts(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t s = 0; s < blocks.size(); ++s) {
      if (s == b || blocks[s].top_row() + 1 != blocks[b].bottom_row) continue;
      const int lo = std::max(blocks[s].left_col, blocks[b].left_col);
      const int hi = std::min(blocks[s].right_col(), blocks[b].right_col());
      if (lo <= hi) contacts[b].push_back({s, lo, hi});
    }
  }
  return contacts;
}

}  // namespace

SettleOutcome settle(std::span<const DropCall> calls, const GridConfig& grid) {
  grid.validate();
  SettleOutcome out;
  out.level.grid = grid;
  std::vector<int> column_top(static_cast<std::size_t>(grid.width), 0);

  for (const auto& call : calls) {
    const auto span = occupied_columns(call);
    if (span.left < 0 || span.right >= grid.width) {
      ++out.dropped_out;
      continue;
    }
    const auto first = column_top.begin() + span.left;
    const auto last = column_top.begin() + span.right + 1;
    const int bottom = *std::max_element(first, last);
    const int height = block_dimensions(call.block_type).height;
    if (bottom + height > grid.height) {
      ++out.dropped_out;
      continue;
    }
    std::fill(first, last, bottom + height);
    out.level.blocks.push_back({call.block_type, span.left, bottom});
  }
  return out;
}

StabilityReport assess_stability(const Level& level) {
  StabilityReport report;
  report.total_blocks = static_cast<int>(level.blocks.size());
  if (level.blocks.empty()) return report;

  const auto contacts = find_contacts(level);
  std::vector<bool> moving(level.blocks.size(), false);

  // Marking a block moving can only remove support from others, so repeated
  // sweeps converge to the same set regardless of visiting order.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < level.blocks.size(); ++b) {
      const auto& block = level.blocks[b];
      if (moving[b] || block.bottom_row == 0) continue;

      int lo = std::numeric_limits<int>::max();
      int hi = std::numeric_limits<int>::min();
      for (const auto& c : contacts[b]) {
        if (moving[c.supporter]) continue;
        lo = std::min(lo, c.first_col);
        hi = std::max(hi, c.last_col);
      }
      const double center = block.left_col + block.width() / 2.0;
      const bool supported = lo <= hi && center >= lo && center <= hi + 1;
      if (!supported) {
        moving[b] = true;
        changed = true;
      }
    }
  }

  for (std::size_t b = 0; b < moving.size(); ++b) {
    if (moving[b]) report.moving_ids.push_back(static_cast<int>(b));
  }
  report.moving_blocks = static_cast<int>(report.moving_ids.size());
  report.sta = static_cast<double>(report.total_blocks - report.moving_blocks) / report.total_blocks;
  return report;
}

}  // namespace pcgeval
