#include "pcgeval/xml_codec.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>

namespace pcgeval {
namespace {

namespace pt = boost::property_tree;

// Half a unit in the last printed decimal place.
constexpr double kPrintQuantum = 0.5e-4;

std::string fixed4(double v) {
  auto s = fmt::format("{:.4f}", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

double parse_real(const std::string& text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(fmt::format("attribute {} is not a finite number: '{}'", what, text));
  }
  return value;
}

int parse_int_attr(const pt::ptree& attrs, const std::string& key, int fallback) {
  auto text = attrs.get_optional<std::string>(key);
  if (!text) return fallback;
  int value = 0;
  auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || ptr != text->data() + text->size()) {
    throw ParseError(fmt::format("Level attribute {} is not an integer: '{}'", key, *text));
  }
  return value;
}

// Recovers an integer lattice index from a world coordinate.
int to_lattice(double world, double origin, double half_extent, double cell, std::string_view what) {
  const double exact = (world - origin) / cell - half_extent;
  const double nearest = std::round(exact);
  const double tolerance = 1e-6 * cell + kPrintQuantum;
  if (std::abs(exact - nearest) * cell > tolerance) {
    throw ParseError(fmt::format("{} coordinate {} is off the cell lattice", what, world));
  }
  return static_cast<int>(nearest);
}

}  // namespace

void XmlMappingConfig::validate() const {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw ConfigError(fmt::format("cell_size must be positive, got {}", cell_size));
  }
  std::set<std::pair<std::string, int>> names;
  for (auto tag : kAllBlockTypes) {
    auto it = block_name_map.find(tag);
    if (it == block_name_map.end()) {
      throw ConfigError(fmt::format("block_name_map has no entry for {}", block_name(tag)));
    }
    if (!names.emplace(it->second.type_name, it->second.rotation_degrees).second) {
      throw ConfigError(fmt::format("block_name_map entry for {} is ambiguous", block_name(tag)));
    }
  }
}

std::string level_to_xml(const Level& level, const XmlMappingConfig& cfg) {
  cfg.validate();
  const double cell = cfg.cell_size;
  const double world_w = level.grid.width * cell;
  const double world_h = level.grid.height * cell;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n";
  out += fmt::format("<Level width=\"2\" columns=\"{}\" rows=\"{}\">\n", level.grid.width, level.grid.height);
  out += fmt::format("  <Camera x=\"{}\" y=\"{}\" minWidth=\"{}\" maxWidth=\"{}\"/>\n",
                     fixed4(cfg.origin_x + world_w / 2), fixed4(cfg.origin_y + world_h / 2),
                     fixed4(world_w), fixed4(world_w * 1.5));
  out += "  <Birds>\n    <Bird type=\"BirdRed\"/>\n  </Birds>\n";
  out += fmt::format("  <Slingshot x=\"{}\" y=\"{}\"/>\n", fixed4(cfg.origin_x - 2 * cell),
                     fixed4(cfg.origin_y + cell));
  if (level.blocks.empty()) {
    out += "  <GameObjects/>\n";
  } else {
    out += "  <GameObjects>\n";
    for (const auto& b : level.blocks) {
      const auto& name = cfg.block_name_map.at(b.block_type);
      const double x = cfg.origin_x + (b.left_col + b.width() / 2.0) * cell;
      const double y = cfg.origin_y + (b.bottom_row + b.height() / 2.0) * cell;
      out += fmt::format("    <Block type=\"{}\" material=\"{}\" x=\"{}\" y=\"{}\" rotation=\"{}\"/>\n",
                         name.type_name, cfg.material, fixed4(x), fixed4(y), name.rotation_degrees);
    }
    out += "  </GameObjects>\n";
  }
  out += "</Level>\n";
  return out;
}

Level xml_to_level(std::string_view doc, const XmlMappingConfig& cfg) {
  cfg.validate();
  pt::ptree tree;
  try {
    std::istringstream in{std::string(doc)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(fmt::format("malformed XML: {}", e.what()));
  }

  const auto root = tree.get_child_optional("Level");
  if (!root) throw ParseError("missing root element Level");

  Level level;
  if (auto attrs = root->get_child_optional("<xmlattr>")) {
    level.grid.width = parse_int_attr(*attrs, "columns", level.grid.width);
    level.grid.height = parse_int_attr(*attrs, "rows", level.grid.height);
  }

  const auto objects = root->get_child_optional("GameObjects");
  if (!objects) throw ParseError("Level has no GameObjects element");

  for (const auto& [tag, node] : *objects) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag != "Block") throw ParseError(fmt::format("unsupported game object <{}>", tag));

    const auto attrs = node.get_child_optional("<xmlattr>");
    if (!attrs) throw ParseError("Block element without attributes");
    auto require = [&](const char* key) {
      auto v = attrs->get_optional<std::string>(key);
      if (!v) throw ParseError(fmt::format("Block is missing attribute {}", key));
      return *v;
    };

    const auto type_name = require("type");
    const double rotation = parse_real(require("rotation"), "rotation");
    std::optional<BlockType> type;
    for (const auto& [candidate, name] : cfg.block_name_map) {
      if (name.type_name == type_name && std::abs(rotation - name.rotation_degrees) < 1e-6) type = candidate;
    }
    if (!type) {
      throw ParseError(fmt::format("no block type maps to '{}' at rotation {}", type_name, rotation));
    }

    const auto dims = block_dimensions(*type);
    PlacedBlock block{*type, 0, 0};
    block.left_col = to_lattice(parse_real(require("x"), "x"), cfg.origin_x, dims.width / 2.0, cfg.cell_size, "x");
    block.bottom_row =
        to_lattice(parse_real(require("y"), "y"), cfg.origin_y, dims.height / 2.0, cfg.cell_size, "y");
    level.blocks.push_back(block);
  }

  try {
    validate_level(level);
  } catch (const ConfigError& e) {
    throw ParseError(fmt::format("decoded level is invalid: {}", e.what()));
  }
  return level;
}

}  // namespace pcgeval
