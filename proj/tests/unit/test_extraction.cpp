#include <doctest.h>

#include "pcgeval/extraction.hpp"

using namespace pcgeval;

TEST_CASE("last fenced block wins") {
  CHECK(extract_last_fenced_block("text ```a``` mid ```b```") == "b");
  CHECK_FALSE(extract_last_fenced_block("no fences at all").has_value());
  CHECK_FALSE(extract_last_fenced_block("```x").has_value());
}

TEST_CASE("info string on the opening fence is dropped") {
  CHECK(extract_last_fenced_block("```python\ndrop_block('b11', 1)\n```") == "drop_block('b11', 1)\n");
  // No newline after the tag: the word is content, not a tag.
  CHECK(extract_last_fenced_block("```python```") == "python");
}

TEST_CASE("grammar accepts quotes and whitespace") {
  auto r = parse_drop_calls("drop_block('b31', 10)\ndrop_block('b11', 10)");
  REQUIRE(r.ok());
  CHECK(r.calls == std::vector<DropCall>{{BlockType::B31, 10}, {BlockType::B11, 10}});

  r = parse_drop_calls("drop_block(\"b13\" , 0)");
  REQUIRE(r.ok());
  CHECK(r.calls == std::vector<DropCall>{{BlockType::B13, 0}});

  r = parse_drop_calls("  drop_block( b11 ,+3 )  ");
  REQUIRE(r.ok());
  CHECK(r.calls == std::vector<DropCall>{{BlockType::B11, 3}});
}

TEST_CASE("strict grammar rejects unknown lines") {
  auto r = parse_drop_calls("ab_drop(1, 2)");
  CHECK(r.status == ExtractionStatus::malformed);
  CHECK(r.calls.empty());

  r = parse_drop_calls("drop_block('b11', 1)\nprint('hi')\ndrop_block('b11', 2)");
  CHECK(r.status == ExtractionStatus::malformed);
  CHECK(r.calls.empty());
  CHECK_FALSE(r.diagnostics.empty());

  r = parse_drop_calls("drop_block('b11', 1) # trailing comment");
  CHECK(r.status == ExtractionStatus::malformed);
}

TEST_CASE("lenient grammar skips unknown lines in order") {
  auto r = parse_drop_calls("drop_block('b11', 1)\nprint('hi')\ndrop_block('b31', 2)", GrammarMode::lenient);
  REQUIRE(r.ok());
  CHECK(r.calls == std::vector<DropCall>{{BlockType::B11, 1}, {BlockType::B31, 2}});
  CHECK(r.diagnostics.size() == 1);
}

TEST_CASE("blank lines and comments are filler") {
  auto r = parse_drop_calls("\n# I\n\ndrop_block('b11', 1)\n   \n");
  REQUIRE(r.ok());
  CHECK(r.calls.size() == 1);
  CHECK(parse_drop_calls("# nothing\n\n").status == ExtractionStatus::no_calls);
  CHECK(parse_drop_calls("").status == ExtractionStatus::no_calls);
}

TEST_CASE("extract_program reports no_fence") {
  CHECK(extract_program("drop_block('b11', 1)").status == ExtractionStatus::no_fence);
  auto r = extract_program("ok\n```\ndrop_block('b13', 4)\n```\n");
  REQUIRE(r.ok());
  CHECK(r.calls.front() == DropCall{BlockType::B13, 4});
}

TEST_CASE("format_program parses back to the same calls") {
  const std::vector<DropCall> calls{{BlockType::B31, 10}, {BlockType::B13, -1}, {BlockType::B11, 0}};
  const auto text = format_program(calls);
  CHECK(text == "drop_block('b31', 10)\ndrop_block('b13', -1)\ndrop_block('b11', 0)\n");
  auto r = parse_drop_calls(text);
  REQUIRE(r.ok());
  CHECK(r.calls == calls);
}
