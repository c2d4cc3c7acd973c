#pragma once

#include <map>
#include <string>
#include <string_view>

#include "pcgeval/core_model.hpp"

namespace pcgeval {

struct XmlBlockName {
  std::string type_name;
  int rotation_degrees = 0;
  friend bool operator==(const XmlBlockName&, const XmlBlockName&) = default;
};

// How grid cells map onto Science Birds world coordinates. The defaults are
// placeholders; organisers should set the names and scale their evaluator uses.
struct XmlMappingConfig {
  std::map<BlockType, XmlBlockName> block_name_map = {
      {BlockType::B11, {"SquareSmall", 0}},
      {BlockType::B13, {"RectSmall", 90}},
      {BlockType::B31, {"RectSmall", 0}},
  };
  double cell_size = 1.0;
  double origin_x = -10.0;
  double origin_y = -3.5;
  std::string material = "stone";

  void validate() const;
};

// Byte-deterministic: fixed element and attribute order, 4-decimal reals, '\n' newlines.
std::string level_to_xml(const Level& level, const XmlMappingConfig& cfg = {});

// Inverse of level_to_xml. Throws ParseError on schema violations, unknown
// block names, or coordinates that are not on the cell lattice.
Level xml_to_level(std::string_view doc, const XmlMappingConfig& cfg = {});

}  // namespace pcgeval
