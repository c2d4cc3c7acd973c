#pragma once

// Shipped data: the 2023 competition score table, the per-character build
// programs (templates and few-shot material) and the fixture manifest.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/classify.hpp"
#include "pcgeval/core_model.hpp"
#include "pcgeval/raster.hpp"

namespace pcgeval {

struct ScoreColumn {
  double norm_prompt;
  double prompt;
  int rank;
};

// One row of the published 2023 results, re-scored three ways.
struct PublishedResult {
  std::string_view name;
  ScoreColumn original;
  ScoreColumn old_classifier;
  ScoreColumn new_classifier;
};

std::span<const PublishedResult> published_results();

struct PromptScore {
  std::string name;
  double prompt;
};

// (name, prompt_k) of the original column, in published order.
std::vector<PromptScore> load_table1_dataset();

enum class FixtureKind { character_program, mock_script, score_dataset, golden, prompt, workspace };

struct FixtureEntry {
  std::string id;
  FixtureKind kind;
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string provenance;
};

// Throws LoadError on unknown kinds, missing provenance, or missing files.
std::vector<FixtureEntry> load_fixture_manifest(const std::filesystem::path& manifest);

// Source-tree fixtures when present, else the installed share directory.
std::filesystem::path default_fixtures_dir();

std::filesystem::path character_program_path(const std::filesystem::path& dir, char character);
std::vector<DropCall> load_character_program(const std::filesystem::path& dir, char character);

// Settles and renders each character's program into a template.
TemplateSet build_template_set(const std::filesystem::path& dir, const std::vector<char>& alphabet,
                               const GridConfig& grid = {}, const RasterOptions& raster = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace pcgeval
