#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "../support/oracles.hpp"
#include "../support/test_support.hpp"
#include "pcgeval/classify.hpp"
#include "pcgeval/fixtures.hpp"
#include "pcgeval/levelgen.hpp"
#include "pcgeval/raster.hpp"

using namespace pcgeval;
using testing_support::TempDir;

TEST_CASE("raster examples") {
  auto empty = rasterize(Level{}, {16, 1});
  CHECK(empty.width_px == 48);
  CHECK(empty.height_px == 48);
  CHECK(empty.black_count() == 0);

  auto one = rasterize(Level{{20, 16}, {{BlockType::B11, 7, 0}}}, {2, 0});
  CHECK(one.width_px == 2);
  CHECK(one.black_count() == 4);

  Level stack{{20, 16}, {{BlockType::B11, 3, 0}, {BlockType::B11, 3, 1}, {BlockType::B11, 3, 2}}};
  auto img = rasterize(stack, {1, 0});
  REQUIRE(img.width_px == 3);
  REQUIRE(img.height_px == 3);
  for (int y = 0; y < 3; ++y) {
    CHECK(img.at(0, y) == kWhite);
    CHECK(img.at(1, y) == kBlack);
    CHECK(img.at(2, y) == kWhite);
  }
}

TEST_CASE("ground is at the bottom of the image") {
  // Bar at the bottom, square on its left end.
  Level level{{20, 16}, {{BlockType::B31, 0, 0}, {BlockType::B11, 0, 1}}};
  auto img = rasterize(level, {1, 0});
  REQUIRE(img.width_px == 3);
  REQUIRE(img.height_px == 3);
  // 3x2 box on a 3x3 canvas: offset (3-2)/2 = 0, the spare row ends up below.
  CHECK(img.at(0, 0) == kBlack);
  CHECK(img.at(1, 0) == kWhite);
  CHECK(img.at(2, 0) == kWhite);
  for (int x = 0; x < 3; ++x) {
    CHECK(img.at(x, 1) == kBlack);
    CHECK(img.at(x, 2) == kWhite);
  }
}

TEST_CASE("rasterize matches the cell-image oracle on random levels") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> len(0, 30), type(0, 2), x(0, 19), px(1, 5), pad(0, 2);
  for (int n = 0; n < 300; ++n) {
    std::vector<DropCall> calls(static_cast<std::size_t>(len(rng)));
    for (auto& c : calls) c = {kAllBlockTypes[type(rng)], x(rng)};
    const auto level = settle(calls, {}).level;
    const int cell = px(rng), p = pad(rng);
    CHECK(rasterize(level, {cell, p}) == oracle::render(level, cell, p));
  }
}

TEST_CASE("horizontal shifts do not change the image") {
  const auto dir = testing_support::fixtures_dir() / "characters";
  for (char c : std::string("ILTH")) {
    const auto calls = load_character_program(dir, c);
    const auto base = rasterize(settle(calls, {}).level);
    for (int dx : {-7, -3, 1, 4, 8}) {
      auto moved = calls;
      bool fits = true;
      for (auto& call : moved) {
        call.x_position += dx;
        const auto span = occupied_columns(call);
        fits = fits && span.left >= 0 && span.right < 20;
      }
      if (!fits) continue;
      CHECK(rasterize(settle(moved, {}).level) == base);
    }
  }
}

TEST_CASE("PGM encoding") {
  Bitmap white(1, 1, kWhite);
  CHECK(encode_pgm(white) == std::string("P5\n1 1\n255\n\xFF", 12));
  Bitmap black(1, 1, kBlack);
  CHECK(encode_pgm(black) == std::string("P5\n1 1\n255\n\x00", 12));
  Bitmap two(2, 1);
  two.at(0, 0) = kBlack;
  CHECK(encode_pgm(two) == std::string("P5\n2 1\n255\n\x00\xFF", 13));
}

TEST_CASE("PGM decoding") {
  Bitmap img(3, 2);
  img.at(1, 1) = 17;
  CHECK(decode_pgm(encode_pgm(img)) == img);
  CHECK(decode_pgm(std::string("P5\n# made by hand\n1 1\n255\n\x00", 27)).at(0, 0) == 0);
  CHECK_THROWS_AS(decode_pgm("P2\n1 1\n255\n0"), ParseError);
  CHECK_THROWS_AS(decode_pgm(std::string("P5\n2 2\n255\n\x00", 12)), ParseError);
  CHECK_THROWS_AS(decode_pgm(std::string("P5\n1 1\n65535\n\x00\x00", 15)), ParseError);
}

TEST_CASE("goldens for the demo I and L renderings") {
  const auto dir = testing_support::fixtures_dir();
  for (char c : std::string("IL")) {
    const auto level = settle(load_character_program(dir / "characters", c), {}).level;
    const auto golden = testing_support::slurp(dir / "golden" / fmt::format("demo_{}.pgm", c));
    CHECK(encode_pgm(rasterize(level)) == golden);
    CHECK(encode_pgm(oracle::render(level, 16, 1)) == golden);
  }
}

TEST_CASE("softmax examples") {
  Logits flat{std::vector<double>(26, 3.0)};
  for (double p : softmax(flat).v) CHECK(p == doctest::Approx(1.0 / 26).epsilon(1e-12));

  Logits two{std::vector<double>(26, -1e9)};
  two.z[0] = std::log(3.0);
  two.z[1] = 0.0;
  const auto p = softmax(two);
  CHECK(std::abs(p.v[0] - 0.75) < 1e-9);
  CHECK(std::abs(p.v[1] - 0.25) < 1e-9);

  // Large logits do not overflow.
  Logits big{{1000.0, 1000.0}};
  CHECK(softmax(big).v[0] == doctest::Approx(0.5));
}

TEST_CASE("downsample keeps the dark half") {
  Bitmap img(32, 32);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 16; ++x) img.at(x, y) = kBlack;
  }
  const auto g = downsample(img);
  for (int gy = 0; gy < 16; ++gy) {
    for (int gx = 0; gx < 16; ++gx) CHECK(g[static_cast<std::size_t>(gy * 16 + gx)] == (gx < 8));
  }
  // Narrow images replicate pixels instead of producing empty cells.
  Bitmap tiny(1, 1, kBlack);
  const auto t = downsample(tiny);
  CHECK(std::all_of(t.begin(), t.end(), [](bool b) { return b; }));
}

TEST_CASE("template classifier behaviour") {
  const auto dir = testing_support::fixtures_dir() / "characters";
  const auto alphabet = EvaluationConfig::default_alphabet();
  const auto templates = build_template_set(dir, alphabet);

  for (int j = 0; j < 26; ++j) {
    const auto image = rasterize(settle(load_character_program(dir, alphabet[static_cast<std::size_t>(j)]), {}).level);
    const auto z = template_classify(image, templates).z;
    const auto best = std::max_element(z.begin(), z.end()) - z.begin();
    CHECK(best == j);
    CHECK(z[static_cast<std::size_t>(j)] == 10.0);

    const auto doubled = template_classify(image, templates, 20.0).z;
    for (std::size_t c = 0; c < 26; ++c) CHECK(doubled[c] == doctest::Approx(2.0 * z[c]));
  }

  TemplateSet same(alphabet);
  Glyph g{};
  g[17] = true;
  for (char c : alphabet) same.add(c, g);
  const auto z = template_classify(Bitmap(48, 48), same).z;
  for (double v : z) CHECK(v == z.front());

  TemplateSet partial(alphabet);
  partial.add('A', g);
  CHECK_THROWS_AS(partial.require_complete(), ConfigError);
}

TEST_CASE("external logits parsing") {
  std::string zeros = "[";
  for (int n = 0; n < 26; ++n) zeros += n ? ",0" : "0";
  zeros += "]";
  auto table = parse_external_logits("{\"A/1.pgm\": " + zeros + "}");
  REQUIRE(table.size() == 1);
  for (double p : softmax(table.at("A/1.pgm")).v) CHECK(p == doctest::Approx(1.0 / 26));

  std::string short_row = "[0";
  for (int n = 1; n < 25; ++n) short_row += ",0";
  short_row += "]";
  CHECK_THROWS_AS(parse_external_logits("{\"A/1.pgm\": " + short_row + "}"), LoadError);
  CHECK_THROWS_AS(parse_external_logits(R"({"A/1.pgm": ["NaN"]})", 1), LoadError);
  CHECK_THROWS_AS(parse_external_logits(R"({"A/1.pgm": [1e400]})", 1), LoadError);
  CHECK_THROWS_AS(parse_external_logits("[1, 2]", 2), LoadError);
  CHECK_THROWS_AS(load_external_logits("/nonexistent/logits.json"), LoadError);

  ExternalLogitsClassifier cls(parse_external_logits(R"({"x": [1, 2]})", 2));
  CHECK(cls.classify(Bitmap(1, 1), "x").has_value());
  CHECK_FALSE(cls.classify(Bitmap(1, 1), "y").has_value());
}
