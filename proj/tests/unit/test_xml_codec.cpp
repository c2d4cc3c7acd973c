#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/test_support.hpp"
#include "pcgeval/fixtures.hpp"
#include "pcgeval/levelgen.hpp"
#include "pcgeval/xml_codec.hpp"

using namespace pcgeval;

TEST_CASE("empty level has an empty GameObjects element") {
  const auto doc = level_to_xml(Level{});
  CHECK(doc.find("<GameObjects/>") != std::string::npos);
  CHECK(doc.find("<Block ") == std::string::npos);
  CHECK(xml_to_level(doc).blocks.empty());
}

TEST_CASE("one square at the origin") {
  XmlMappingConfig cfg;
  cfg.origin_x = 0.0;
  cfg.origin_y = 0.0;
  Level level{{20, 16}, {{BlockType::B11, 0, 0}}};
  const auto doc = level_to_xml(level, cfg);
  CHECK(doc.find(R"(<Block type="SquareSmall" material="stone" x="0.5000" y="0.5000" rotation="0"/>)") !=
        std::string::npos);
  const auto back = xml_to_level(doc, cfg);
  CHECK(back == level);
}

TEST_CASE("vertical bar is the rotated rectangle and keeps its centre") {
  XmlMappingConfig cfg;
  cfg.origin_x = 0.0;
  cfg.origin_y = 0.0;
  Level level{{20, 16}, {{BlockType::B13, 2, 0}, {BlockType::B31, 1, 3}}};
  const auto doc = level_to_xml(level, cfg);
  CHECK(doc.find(R"(type="RectSmall" material="stone" x="2.5000" y="1.5000" rotation="90")") != std::string::npos);
  CHECK(doc.find(R"(type="RectSmall" material="stone" x="2.5000" y="3.5000" rotation="0")") != std::string::npos);
  CHECK(xml_to_level(doc, cfg) == level);
}

TEST_CASE("unknown block names and off-lattice positions are parse errors") {
  XmlMappingConfig cfg;
  cfg.origin_x = 0.0;
  cfg.origin_y = 0.0;
  const auto doc = level_to_xml(Level{{20, 16}, {{BlockType::B11, 0, 0}}}, cfg);

  auto renamed = doc;
  renamed.replace(renamed.find("SquareSmall"), 11, "TriangleBig");
  CHECK_THROWS_AS(xml_to_level(renamed, cfg), ParseError);

  auto rotated = doc;
  rotated.replace(rotated.find(R"(rotation="0")"), 12, R"(rotation="45")");
  CHECK_THROWS_AS(xml_to_level(rotated, cfg), ParseError);

  auto shifted = doc;
  shifted.replace(shifted.find(R"(x="0.5000")"), 10, R"(x="0.8000")");
  CHECK_THROWS_AS(xml_to_level(shifted, cfg), ParseError);

  CHECK_THROWS_AS(xml_to_level("<Level", cfg), ParseError);
  CHECK_THROWS_AS(xml_to_level("<?xml version=\"1.0\"?><Other/>", cfg), ParseError);
}

TEST_CASE("overlapping blocks in a document are rejected") {
  XmlMappingConfig cfg;
  auto doc = level_to_xml(Level{{20, 16}, {{BlockType::B11, 3, 0}, {BlockType::B11, 4, 0}}}, cfg);
  // Move the second square onto the first.
  const auto second = doc.rfind("x=\"");
  doc.replace(second, 10, "x=\"-6.5000");
  CHECK_THROWS_AS(xml_to_level(doc, cfg), ParseError);
}

TEST_CASE("mapping validation") {
  XmlMappingConfig cfg;
  cfg.block_name_map.erase(BlockType::B13);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.block_name_map[BlockType::B13] = cfg.block_name_map[BlockType::B31];
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.cell_size = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("round trip over random settled levels with scaled cells") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 40), type(0, 2), x(0, 19);
  XmlMappingConfig cfg;
  cfg.cell_size = 0.43;
  cfg.origin_x = -3.1;
  cfg.origin_y = 2.25;
  for (int n = 0; n < 200; ++n) {
    std::vector<DropCall> calls(static_cast<std::size_t>(len(rng)));
    for (auto& c : calls) c = {kAllBlockTypes[type(rng)], x(rng)};
    const auto level = settle(calls, {}).level;
    CHECK(xml_to_level(level_to_xml(level, cfg), cfg) == level);
  }
}

TEST_CASE("demo level matches the golden document") {
  const auto dir = testing_support::fixtures_dir();
  const auto level = settle(load_character_program(dir / "characters", 'L'), {}).level;
  CHECK(level_to_xml(level) == testing_support::slurp(dir / "golden" / "demo_level_L.xml"));
}
