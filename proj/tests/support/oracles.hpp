#pragma once

// Reference implementations written directly from the metric and geometry
// definitions, kept separate from the library so the tests compare two codes.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pcgeval/classify.hpp"
#include "pcgeval/core_model.hpp"
#include "pcgeval/levelgen.hpp"
#include "pcgeval/raster.hpp"

namespace oracle {

using pcgeval::BlockType;
using pcgeval::DropCall;
using pcgeval::GridConfig;
using pcgeval::Level;
using pcgeval::PlacedBlock;

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  const double dot = std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
  const double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
  const double vv = std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return std::max(0.0, 1.0 - dot / std::sqrt(uu * vv));
}

// Full distance matrix, upper triangle summed row by row, over T choose 2.
inline double diversity(const std::vector<std::vector<double>>& vectors, int trials) {
  const std::size_t n = vectors.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) d[a][b] = cosine(vectors[a], vectors[b]);
    }
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) sum += d[a][b];
  }
  const long pairs = static_cast<long>(trials) * (trials - 1) / 2;
  return sum / static_cast<double>(pairs);
}

// Occupancy-grid drop: each block starts above the grid and moves down one row
// at a time until the next row would collide or it reaches the ground.
struct Settled {
  Level level;
  int rejected = 0;
};

inline Settled settle(const std::vector<DropCall>& calls, GridConfig grid) {
  Settled out;
  out.level.grid = grid;
  std::vector<std::vector<bool>> filled(static_cast<std::size_t>(grid.width),
                                        std::vector<bool>(static_cast<std::size_t>(grid.height) + 8, false));
  for (const auto& call : calls) {
    const auto dims = pcgeval::block_dimensions(call.block_type);
    const int left = call.x_position - (dims.width - 1) / 2;
    const int right = left + dims.width - 1;
    if (left < 0 || right >= grid.width) {
      ++out.rejected;
      continue;
    }
    auto free_at = [&](int row) {
      for (int c = left; c <= right; ++c) {
        for (int r = row; r < row + dims.height; ++r) {
          if (filled[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]) return false;
        }
      }
      return true;
    };
    int row = grid.height;  // just above the top edge
    while (row > 0 && free_at(row - 1)) --row;
    if (row + dims.height > grid.height) {
      ++out.rejected;
      continue;
    }
    for (int c = left; c <= right; ++c) {
      for (int r = row; r < row + dims.height; ++r) filled[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] = true;
    }
    out.level.blocks.push_back({call.block_type, left, row});
  }
  return out;
}

// Cell image first (true = covered), then scaled by cell_px and centred.
inline pcgeval::Bitmap render(const Level& level, int cell_px, int pad) {
  if (level.blocks.empty()) {
    const int side = cell_px * (1 + 2 * pad);
    return pcgeval::Bitmap(side, side);
  }
  std::vector<std::pair<int, int>> cells;
  for (const auto& b : level.blocks) {
    for (int dc = 0; dc < b.width(); ++dc) {
      for (int dr = 0; dr < b.height(); ++dr) cells.emplace_back(b.left_col + dc, b.bottom_row + dr);
    }
  }
  int c0 = cells[0].first, c1 = c0, r0 = cells[0].second, r1 = r0;
  for (auto [c, r] : cells) {
    c0 = std::min(c0, c);
    c1 = std::max(c1, c);
    r0 = std::min(r0, r);
    r1 = std::max(r1, r);
  }
  const int cw = c1 - c0 + 1 + 2 * pad;
  const int ch = r1 - r0 + 1 + 2 * pad;
  std::vector<std::vector<bool>> cell_img(static_cast<std::size_t>(ch), std::vector<bool>(static_cast<std::size_t>(cw)));
  for (auto [c, r] : cells) cell_img[static_cast<std::size_t>(r1 - r + pad)][static_cast<std::size_t>(c - c0 + pad)] = true;

  const int side = std::max(cw, ch) * cell_px;
  const int ox = (side - cw * cell_px) / 2;
  const int oy = (side - ch * cell_px) / 2;
  pcgeval::Bitmap img(side, side);
  for (int y = 0; y < ch * cell_px; ++y) {
    for (int x = 0; x < cw * cell_px; ++x) {
      if (cell_img[static_cast<std::size_t>(y / cell_px)][static_cast<std::size_t>(x / cell_px)]) {
        img.at(ox + x, oy + y) = pcgeval::kBlack;
      }
    }
  }
  return img;
}

}  // namespace oracle
