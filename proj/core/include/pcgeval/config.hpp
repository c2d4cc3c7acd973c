#pragma once

// Run configuration: one INI-style document, every key optional.
//
//   [evaluation]  trials, alphabet
//   [grid]        width, height
//   [xml]         cell_size, origin_x, origin_y, material, b11, b13, b31 (as Name:rotation)
//   [raster]      cell_px, pad_cells
//   [classifier]  mode (template|external), templates_dir, logits_file, alpha
//   [extraction]  mode (strict|lenient)
//   [budgets]     max_tokens, max_seconds
//   [provider]    mock_script, model, base_url, path, api_key_env
//   [strategy]    name, task_prompt, format_prompt, eval_prompt, final_prompt,
//                 examples, max_depth, branching
//
// Relative paths resolve against the config file's directory.

#include <filesystem>
#include <string>
#include <string_view>

#include "pcgeval/core_model.hpp"
#include "pcgeval/extraction.hpp"
#include "pcgeval/harness.hpp"
#include "pcgeval/raster.hpp"
#include "pcgeval/xml_codec.hpp"

namespace pcgeval {

enum class ClassifierMode { template_matcher, external_logits };

struct ClassifierConfig {
  ClassifierMode mode = ClassifierMode::template_matcher;
  std::filesystem::path templates_dir;  // empty: shipped character programs
  std::filesystem::path logits_file;
  double alpha = 10.0;
};

struct StrategyConfig {
  Strategy strategy = Strategy::zero_shot;
  std::filesystem::path task_prompt;
  std::filesystem::path format_prompt;
  std::filesystem::path eval_prompt;
  std::filesystem::path final_prompt;
  std::string example_characters = "GQS";
  int max_depth = 2;
  int branching = 2;
};

struct ProviderConfig {
  std::filesystem::path mock_script;
  LiveProviderConfig live;
};

struct PipelineConfig {
  EvaluationConfig evaluation;
  GridConfig grid;
  XmlMappingConfig xml;
  RasterOptions raster;
  ClassifierConfig classifier;
  GrammarMode grammar = GrammarMode::strict;
  Budgets budgets;
  ProviderConfig provider;
  StrategyConfig strategy;

  void validate() const;
};

// Throws ConfigError for unknown sections/keys or malformed values.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace pcgeval
