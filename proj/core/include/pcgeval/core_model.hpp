#pragma once

// Shared vocabulary: block geometry, grid extents, placed structures and the
// trial/character/program indexing used by every pipeline stage.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcgeval {

// Error hierarchy. Per-trial problems are data (status enums); these are for
// caller mistakes and unreadable inputs.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};
struct LoadError : Error {
  using Error::Error;
};

// Block names read as bWH: b11 square, b13 vertical bar, b31 horizontal bar.
enum class BlockType { B11, B13, B31 };

inline constexpr BlockType kAllBlockTypes[] = {BlockType::B11, BlockType::B13, BlockType::B31};

struct Dimensions {
  int width;
  int height;
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

constexpr Dimensions block_dimensions(BlockType tag) {
  switch (tag) {
    case BlockType::B11: return {1, 1};
    case BlockType::B13: return {1, 3};
    case BlockType::B31: return {3, 1};
  }
  return {1, 1};
}

// "b11", "b13", "b31"
std::string_view block_name(BlockType tag);
std::optional<BlockType> block_from_name(std::string_view name);

struct DropCall {
  BlockType block_type;
  int x_position;  // center column; range-checked at settle time
  friend bool operator==(const DropCall&, const DropCall&) = default;
};

// Inclusive column span.
struct ColumnSpan {
  int left;
  int right;
  friend bool operator==(const ColumnSpan&, const ColumnSpan&) = default;
};

constexpr ColumnSpan occupied_columns(const DropCall& call) {
  const int half = (block_dimensions(call.block_type).width - 1) / 2;
  return {call.x_position - half, call.x_position + half};
}

// Formats a call the way the extraction grammar reads it back: drop_block('b31', 10)
std::string format_drop_call(const DropCall& call);

struct GridConfig {
  int width = 20;
  int height = 16;

  void validate() const;
  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct PlacedBlock {
  BlockType block_type;
  int left_col;
  int bottom_row;  // row 0 touches the ground

  int width() const { return block_dimensions(block_type).width; }
  int height() const { return block_dimensions(block_type).height; }
  int right_col() const { return left_col + width() - 1; }
  int top_row() const { return bottom_row + height() - 1; }

  friend bool operator==(const PlacedBlock&, const PlacedBlock&) = default;
};

struct Level {
  GridConfig grid;
  std::vector<PlacedBlock> blocks;  // drop order

  friend bool operator==(const Level&, const Level&) = default;
};

// Throws ConfigError naming the first violated invariant (out of grid, overlap).
void validate_level(const Level& level);

// Number of grid cells covered by the level's blocks.
std::size_t occupied_cell_count(const Level& level);

struct EvaluationConfig {
  int trials = 10;
  int programs = 1;
  std::vector<char> alphabet = default_alphabet();

  int characters() const { return static_cast<int>(alphabet.size()); }
  char character_at(int index) const;
  // Throws ConfigError for characters outside the alphabet.
  int index_of(char character) const;
  std::optional<int> find(char character) const;
  void validate() const;

  static std::vector<char> default_alphabet();
};

// Two-digit, one-based trial label used in file names: 1 -> "01".
std::string trial_label(int trial_index);

}  // namespace pcgeval
