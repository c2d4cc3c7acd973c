#include "pcgeval/core_model.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace pcgeval {

std::string_view block_name(BlockType tag) {
  switch (tag) {
    case BlockType::B11: return "b11";
    case BlockType::B13: return "b13";
    case BlockType::B31: return "b31";
  }
  return "b11";
}

std::optional<BlockType> block_from_name(std::string_view name) {
  for (auto tag : kAllBlockTypes) {
    if (block_name(tag) == name) return tag;
  }
  return std::nullopt;
}

std::string format_drop_call(const DropCall& call) {
  return fmt::format("drop_block('{}', {})", block_name(call.block_type), call.x_position);
}

void GridConfig::validate() const {
  if (width < 3 || height < 3) {
    throw ConfigError(fmt::format("grid must be at least 3x3, got {}x{}", width, height));
  }
}

void validate_level(const Level& level) {
  level.grid.validate();
  std::set<std::pair<int, int>> cells;
  for (std::size_t n = 0; n < level.blocks.size(); ++n) {
    const auto& b = level.blocks[n];
    if (b.left_col < 0 || b.right_col() >= level.grid.width || b.bottom_row < 0 ||
        b.top_row() >= level.grid.height) {
      throw ConfigError(fmt::format("block {} ({}) at col {} row {} lies outside the {}x{} grid", n,
                                    block_name(b.block_type), b.left_col, b.bottom_row,
                                    level.grid.width, level.grid.height));
    }
    for (int c = b.left_col; c <= b.right_col(); ++c) {
      for (int r = b.bottom_row; r <= b.top_row(); ++r) {
        if (!cells.emplace(c, r).second) {
          throw ConfigError(fmt::format("block {} overlaps cell ({}, {})", n, c, r));
        }
      }
    }
  }
}

std::size_t occupied_cell_count(const Level& level) {
  std::size_t n = 0;
  for (const auto& b : level.blocks) n += static_cast<std::size_t>(b.width() * b.height());
  return n;
}

std::vector<char> EvaluationConfig::default_alphabet() {
  std::vector<char> letters;
  for (char c = 'A'; c <= 'Z'; ++c) letters.push_back(c);
  return letters;
}

char EvaluationConfig::character_at(int index) const {
  if (index < 0 || index >= characters()) {
    throw ConfigError(fmt::format("character index {} outside alphabet of {}", index, characters()));
  }
  return alphabet[static_cast<std::size_t>(index)];
}

std::optional<int> EvaluationConfig::find(char character) const {
  auto it = std::find(alphabet.begin(), alphabet.end(), character);
  if (it == alphabet.end()) return std::nullopt;
  return static_cast<int>(it - alphabet.begin());
}

int EvaluationConfig::index_of(char character) const {
  if (auto idx = find(character)) return *idx;
  throw ConfigError(fmt::format("character '{}' is not in the alphabet", character));
}

void EvaluationConfig::validate() const {
  if (trials < 2) throw ConfigError(fmt::format("need at least 2 trials for diversity, got {}", trials));
  if (programs < 1) throw ConfigError("need at least one program");
  if (alphabet.empty()) throw ConfigError("alphabet is empty");
  std::set<char> seen(alphabet.begin(), alphabet.end());
  if (seen.size() != alphabet.size()) throw ConfigError("alphabet contains duplicate characters");
}

std::string trial_label(int trial_index) { return fmt::format("{:02d}", trial_index); }

}  // namespace pcgeval
