#include "pcgeval/extraction.hpp"

#include <charconv>
#include <regex>

#include <fmt/format.h>

namespace pcgeval {
namespace {

constexpr std::string_view kFence = "```";

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\f\v";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

bool is_info_string(std::string_view line) {
  static const std::regex tag(R"([A-Za-z0-9_+.#-]*)");
  const auto t = trim(line);
  return std::regex_match(t.begin(), t.end(), tag);
}

const std::regex& call_pattern() {
  static const std::regex re(
      R"(drop_block\s*\(\s*(['"]?)(b11|b13|b31)\1\s*,\s*([+-]?[0-9]+)\s*\))");
  return re;
}

std::optional<int> parse_int(std::string_view digits) {
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

}  // namespace

std::string_view to_string(ExtractionStatus status) {
  switch (status) {
    case ExtractionStatus::ok: return "ok";
    case ExtractionStatus::no_fence: return "no_fence";
    case ExtractionStatus::no_calls: return "no_calls";
    case ExtractionStatus::malformed: return "malformed";
  }
  return "malformed";
}

std::optional<std::string> extract_last_fenced_block(std::string_view response) {
  std::size_t before_last = std::string_view::npos;
  std::size_t last = std::string_view::npos;
  for (auto pos = response.find(kFence); pos != std::string_view::npos;
       pos = response.find(kFence, pos + kFence.size())) {
    before_last = last;
    last = pos;
  }
  if (before_last == std::string_view::npos) return std::nullopt;

  auto inner = response.substr(before_last + kFence.size(), last - before_last - kFence.size());
  if (const auto nl = inner.find('\n'); nl != std::string_view::npos && is_info_string(inner.substr(0, nl))) {
    inner.remove_prefix(nl + 1);
  }
  return std::string(inner);
}

ExtractionResult parse_drop_calls(std::string_view code, GrammarMode mode) {
  ExtractionResult result;
  bool malformed = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= code.size()) {
    auto end = code.find('\n', start);
    if (end == std::string_view::npos) end = code.size();
    const auto line = trim(code.substr(start, end - start));
    ++line_no;
    start = end + 1;

    if (line.empty() || line.front() == '#') continue;

    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(line.begin(), line.end(), m, call_pattern())) {
      const auto type = block_from_name(std::string_view(&*m[2].first, static_cast<std::size_t>(m[2].length())));
      const auto x = parse_int(std::string_view(&*m[3].first, static_cast<std::size_t>(m[3].length())));
      if (type && x) {
        result.calls.push_back({*type, *x});
        continue;
      }
      result.diagnostics.push_back(fmt::format("line {}: x_position out of range: {}", line_no, line));
    } else {
      result.diagnostics.push_back(fmt::format("line {}: not a drop_block call: {}", line_no, line));
    }
    malformed = true;
  }

  if (malformed && mode == GrammarMode::strict) {
    result.calls.clear();
    result.status = ExtractionStatus::malformed;
  } else if (result.calls.empty()) {
    result.status = malformed ? ExtractionStatus::malformed : ExtractionStatus::no_calls;
  } else {
    result.status = ExtractionStatus::ok;
  }
  return result;
}

ExtractionResult extract_program(std::string_view response, GrammarMode mode) {
  auto code = extract_last_fenced_block(response);
  if (!code) {
    ExtractionResult result;
    result.status = ExtractionStatus::no_fence;
    result.diagnostics.emplace_back("fewer than two ``` fences in response");
    return result;
  }
  return parse_drop_calls(*code, mode);
}

std::string format_program(const std::vector<DropCall>& calls) {
  std::string out;
  for (const auto& call : calls) {
    out += format_drop_call(call);
    out += '\n';
  }
  return out;
}

}  // namespace pcgeval
