#pragma once

// Code extraction: pull the last fenced block out of a model response and read
// it as a sequence of drop_block(<type>, <x>) calls.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/core_model.hpp"

namespace pcgeval {

enum class ExtractionStatus { ok, no_fence, no_calls, malformed };

std::string_view to_string(ExtractionStatus status);

struct ExtractionResult {
  std::vector<DropCall> calls;
  ExtractionStatus status = ExtractionStatus::no_calls;
  std::vector<std::string> diagnostics;

  bool ok() const { return status == ExtractionStatus::ok; }
};

enum class GrammarMode {
  strict,   // any unrecognised line fails the whole program
  lenient,  // unrecognised lines are skipped with a diagnostic
};

// Text strictly between the final two ``` fences. A language tag on the
// opening fence's line is dropped. Absent when fewer than two fences exist.
std::optional<std::string> extract_last_fenced_block(std::string_view response);

ExtractionResult parse_drop_calls(std::string_view code, GrammarMode mode = GrammarMode::strict);

// extract_last_fenced_block followed by parse_drop_calls; a missing fence
// yields status no_fence.
ExtractionResult extract_program(std::string_view response, GrammarMode mode = GrammarMode::strict);

// One canonical call per line, newline terminated. Parses back to the same calls.
std::string format_program(const std::vector<DropCall>& calls);

}  // namespace pcgeval
