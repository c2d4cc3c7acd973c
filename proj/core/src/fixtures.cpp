#include "pcgeval/fixtures.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "pcgeval/extraction.hpp"
#include "pcgeval/levelgen.hpp"

namespace pcgeval {
namespace {

namespace fs = std::filesystem;

// Original 2023 scores next to the re-evaluations with the old and the new
// ViT classifier, as published (values already rounded to 4 decimals).
constexpr PublishedResult kPublished[] = {
    {"The Organizer", {47.8425, 0.3187, 1}, {70.056, 0.0577, 1}, {54.6391, 0.0352, 1}},
    {"dereventsolve", {31.1547, 0.2076, 2}, {0.0808, 0.0001, 12}, {4.1589, 0.0027, 4}},
    {"Soda", {4.7588, 0.0317, 3}, {8.496, 0.007, 2}, {11.3848, 0.0073, 3}},
    {"AdrienTeam", {3.3513, 0.0223, 4}, {7.9497, 0.0065, 3}, {15.7905, 0.0102, 2}},
    {"Saltyfish1884", {2.1244, 0.0142, 5}, {3.9943, 0.0033, 4}, {1.4392, 0.0009, 9}},
    {"zeilde", {2.1233, 0.0141, 6}, {2.445, 0.002, 5}, {2.8, 0.0018, 6}},
    {"Team Staciiaz", {1.955, 0.013, 7}, {2.4223, 0.002, 6}, {3.2831, 0.0021, 5}},
    {"Harry Single Group", {1.8616, 0.0124, 8}, {1.6997, 0.0014, 7}, {2.5088, 0.0016, 7}},
    {"hachi", {1.5704, 0.0105, 9}, {0.5515, 0.0005, 10}, {0.732, 0.0005, 11}},
    {"Back to the future", {1.3773, 0.0092, 10}, {1.0352, 0.0009, 8}, {1.5972, 0.001, 8}},
    {"v1 (Baseline)", {1.1891, 0.0079, 11}, {0.8053, 0.0007, 9}, {0.9407, 0.0006, 10}},
    {"JUSTIN", {0.5243, 0.0035, 12}, {0.4642, 0.0004, 11}, {0.7248, 0.0005, 12}},
    {"Hope", {0.1488, 0.001, 13}, {0.0001, 0.0, 13}, {0.0007, 0.0, 13}},
    {"albatross", {0.0162, 0.0001, 14}, {0.0, 0.0, 14}, {0.0, 0.0, 14}},
    {"Prompt_Wranglers", {0.0023, 0.0, 15}, {0.0, 0.0, 14}, {0.0, 0.0, 14}},
    {"For500", {0.0, 0.0, 16}, {0.0, 0.0, 14}, {0.0, 0.0, 14}},
};

FixtureKind parse_kind(const std::string& text) {
  if (text == "character_program") return FixtureKind::character_program;
  if (text == "mock_script") return FixtureKind::mock_script;
  if (text == "score_dataset") return FixtureKind::score_dataset;
  if (text == "golden") return FixtureKind::golden;
  if (text == "prompt") return FixtureKind::prompt;
  if (text == "workspace") return FixtureKind::workspace;
  throw LoadError(fmt::format("unknown fixture kind '{}'", text));
}

}  // namespace

std::span<const PublishedResult> published_results() { return kPublished; }

std::vector<PromptScore> load_table1_dataset() {
  std::vector<PromptScore> rows;
  for (const auto& row : kPublished) rows.push_back({std::string(row.name), row.original.prompt});
  return rows;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError(fmt::format("cannot read {}", path.string()));
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::vector<FixtureEntry> load_fixture_manifest(const fs::path& manifest) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(fmt::format("fixture manifest {}: {}", manifest.string(), e.what()));
  }
  if (!doc.contains("fixtures") || !doc["fixtures"].is_array()) {
    throw LoadError("fixture manifest needs a 'fixtures' array");
  }
  std::vector<FixtureEntry> entries;
  for (const auto& item : doc["fixtures"]) {
    FixtureEntry entry;
    try {
      entry.id = item.at("id").get<std::string>();
      entry.kind = parse_kind(item.at("kind").get<std::string>());
      entry.path = manifest.parent_path() / item.at("path").get<std::string>();
      entry.provenance = item.at("provenance").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(fmt::format("fixture manifest entry {}: {}", item.dump(), e.what()));
    }
    if (entry.provenance.empty()) throw LoadError(fmt::format("fixture '{}' has no provenance note", entry.id));
    if (!fs::exists(entry.path)) {
      throw LoadError(fmt::format("fixture '{}' points at missing {}", entry.id, entry.path.string()));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

fs::path default_fixtures_dir() {
  const fs::path source(PCGEVAL_DEFAULT_FIXTURES_DIR);
  if (fs::is_directory(source)) return source;
  return fs::path(PCGEVAL_INSTALLED_FIXTURES_DIR);
}

fs::path character_program_path(const fs::path& dir, char character) {
  return dir / fmt::format("{}.txt", character);
}

std::vector<DropCall> load_character_program(const fs::path& dir, char character) {
  const auto path = character_program_path(dir, character);
  auto parsed = parse_drop_calls(read_text_file(path));
  if (!parsed.ok()) {
    throw LoadError(fmt::format("character program {} does not parse ({})", path.string(), to_string(parsed.status)));
  }
  return parsed.calls;
}

TemplateSet build_template_set(const fs::path& dir, const std::vector<char>& alphabet, const GridConfig& grid,
                               const RasterOptions& raster) {
  TemplateSet templates(alphabet);
  for (char c : alphabet) {
    const auto calls = load_character_program(dir, c);
    templates.add(c, rasterize(settle(calls, grid).level, raster));
  }
  templates.require_complete();
  return templates;
}

}  // namespace pcgeval
