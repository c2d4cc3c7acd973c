#include "pcgeval/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace pcgeval {
namespace {

namespace pt = boost::property_tree;
namespace fs = std::filesystem;

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, text));
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError(fmt::format("{}: value must be finite", key));
  }
  return value;
}

XmlBlockName parse_block_name(const std::string& key, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError(fmt::format("{}: expected Name:rotation, got '{}'", key, text));
  }
  return {text.substr(0, colon), parse_number<int>(key, text.substr(colon + 1))};
}

std::vector<char> parse_alphabet(const std::string& text) {
  std::vector<char> out;
  for (char c : text) {
    if (c == ',' || c == ' ') continue;
    out.push_back(c);
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

std::map<std::string, Setter> make_setters(const fs::path& base) {
  auto path_of = [base](const std::string& v) {
    fs::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  std::map<std::string, Setter> s;
  s["evaluation.trials"] = [](auto& c, auto& v) { c.evaluation.trials = parse_number<int>("evaluation.trials", v); };
  s["evaluation.alphabet"] = [](auto& c, auto& v) { c.evaluation.alphabet = parse_alphabet(v); };

  s["grid.width"] = [](auto& c, auto& v) { c.grid.width = parse_number<int>("grid.width", v); };
  s["grid.height"] = [](auto& c, auto& v) { c.grid.height = parse_number<int>("grid.height", v); };

  s["xml.cell_size"] = [](auto& c, auto& v) { c.xml.cell_size = parse_number<double>("xml.cell_size", v); };
  s["xml.origin_x"] = [](auto& c, auto& v) { c.xml.origin_x = parse_number<double>("xml.origin_x", v); };
  s["xml.origin_y"] = [](auto& c, auto& v) { c.xml.origin_y = parse_number<double>("xml.origin_y", v); };
  s["xml.material"] = [](auto& c, auto& v) { c.xml.material = v; };
  for (auto tag : kAllBlockTypes) {
    const auto key = fmt::format("xml.{}", block_name(tag));
    s[key] = [tag, key](auto& c, auto& v) { c.xml.block_name_map[tag] = parse_block_name(key, v); };
  }

  s["raster.cell_px"] = [](auto& c, auto& v) { c.raster.cell_px = parse_number<int>("raster.cell_px", v); };
  s["raster.pad_cells"] = [](auto& c, auto& v) { c.raster.pad_cells = parse_number<int>("raster.pad_cells", v); };

  s["classifier.mode"] = [](auto& c, auto& v) {
    if (v == "template") {
      c.classifier.mode = ClassifierMode::template_matcher;
    } else if (v == "external") {
      c.classifier.mode = ClassifierMode::external_logits;
    } else {
      throw ConfigError(fmt::format("classifier.mode must be template or external, got '{}'", v));
    }
  };
  s["classifier.templates_dir"] = [path_of](auto& c, auto& v) { c.classifier.templates_dir = path_of(v); };
  s["classifier.logits_file"] = [path_of](auto& c, auto& v) { c.classifier.logits_file = path_of(v); };
  s["classifier.alpha"] = [](auto& c, auto& v) { c.classifier.alpha = parse_number<double>("classifier.alpha", v); };

  s["extraction.mode"] = [](auto& c, auto& v) {
    if (v == "strict") {
      c.grammar = GrammarMode::strict;
    } else if (v == "lenient") {
      c.grammar = GrammarMode::lenient;
    } else {
      throw ConfigError(fmt::format("extraction.mode must be strict or lenient, got '{}'", v));
    }
  };

  s["budgets.max_tokens"] = [](auto& c, auto& v) { c.budgets.max_tokens = parse_number<long>("budgets.max_tokens", v); };
  s["budgets.max_seconds"] = [](auto& c, auto& v) {
    c.budgets.max_seconds = parse_number<double>("budgets.max_seconds", v);
  };
  s["budgets.temperature"] = [](auto&, auto&) {
    throw ConfigError("budgets.temperature is fixed at 1 by the competition rules");
  };
  s["budgets.seed"] = [](auto&, auto&) { throw ConfigError("budgets.seed is fixed at 42 by the competition rules"); };

  s["provider.mock_script"] = [path_of](auto& c, auto& v) { c.provider.mock_script = path_of(v); };
  s["provider.model"] = [](auto& c, auto& v) { c.provider.live.model = v; };
  s["provider.base_url"] = [](auto& c, auto& v) { c.provider.live.base_url = v; };
  s["provider.path"] = [](auto& c, auto& v) { c.provider.live.path = v; };
  s["provider.api_key_env"] = [](auto& c, auto& v) { c.provider.live.api_key_env = v; };

  s["strategy.name"] = [](auto& c, auto& v) {
    auto strategy = strategy_from_name(v);
    if (!strategy) throw ConfigError(fmt::format("unknown strategy '{}'", v));
    c.strategy.strategy = *strategy;
  };
  s["strategy.task_prompt"] = [path_of](auto& c, auto& v) { c.strategy.task_prompt = path_of(v); };
  s["strategy.format_prompt"] = [path_of](auto& c, auto& v) { c.strategy.format_prompt = path_of(v); };
  s["strategy.eval_prompt"] = [path_of](auto& c, auto& v) { c.strategy.eval_prompt = path_of(v); };
  s["strategy.final_prompt"] = [path_of](auto& c, auto& v) { c.strategy.final_prompt = path_of(v); };
  s["strategy.examples"] = [](auto& c, auto& v) {
    auto letters = parse_alphabet(v);
    c.strategy.example_characters.assign(letters.begin(), letters.end());
  };
  s["strategy.max_depth"] = [](auto& c, auto& v) { c.strategy.max_depth = parse_number<int>("strategy.max_depth", v); };
  s["strategy.branching"] = [](auto& c, auto& v) { c.strategy.branching = parse_number<int>("strategy.branching", v); };
  return s;
}

}  // namespace

void PipelineConfig::validate() const {
  evaluation.validate();
  grid.validate();
  xml.validate();
  if (raster.cell_px < 1 || raster.pad_cells < 0) throw ConfigError("raster.cell_px must be >= 1 and pad_cells >= 0");
  if (!(classifier.alpha > 0.0)) throw ConfigError("classifier.alpha must be positive");
  if (budgets.max_tokens < 1 || !(budgets.max_seconds > 0.0)) throw ConfigError("budgets must be positive");
  if (strategy.max_depth < 1 || strategy.branching < 1) throw ConfigError("strategy depth and branching must be >= 1");
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config is not valid INI: {}", e.what()));
  }

  PipelineConfig config;
  const auto setters = make_setters(base_dir);
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) throw ConfigError(fmt::format("config key '{}' must live in a [section]", section));
    for (const auto& [key, value] : keys) {
      const auto name = section + "." + key;
      auto it = setters.find(name);
      if (it == setters.end()) throw ConfigError(fmt::format("unknown config key '{}'", name));
      it->second(config, value.data());
    }
  }
  config.validate();
  return config;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace pcgeval
