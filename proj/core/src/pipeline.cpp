#include "pcgeval/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <tuple>

#include <fmt/format.h>

#include "pcgeval/classify.hpp"
#include "pcgeval/extraction.hpp"
#include "pcgeval/fixtures.hpp"
#include "pcgeval/harness.hpp"
#include "pcgeval/levelgen.hpp"
#include "pcgeval/raster.hpp"
#include "pcgeval/xml_codec.hpp"

namespace pcgeval {
namespace fs = std::filesystem;

namespace {

constexpr StageId kStages[] = {StageId::gather,   StageId::extract,  StageId::convert,   StageId::stabilize,
                               StageId::render,   StageId::classify, StageId::diversity, StageId::score};

// --- small file and CSV helpers ---

void write_file(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(fmt::format("short write to {}", path.string()));
}

std::optional<std::string> read_if_exists(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  return read_text_file(path);
}

void remove_if_exists(const fs::path& path) {
  std::error_code ec;
  fs::remove(path, ec);
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_content = false;
  for (std::size_t n = 0; n < text.size(); ++n) {
    const char c = text[n];
    if (quoted) {
      if (c == '"' && n + 1 < text.size() && text[n + 1] == '"') {
        field += '"';
        ++n;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_content = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_content = true;
    } else if (c == '\n') {
      if (row_has_content || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      row_has_content = false;
    } else if (c != '\r') {
      field += c;
      row_has_content = true;
    }
  }
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> to_double(const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> to_int(const std::string& text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

// --- per-stage bookkeeping ---

struct Failure {
  char character;
  int trial;
  std::string reason;
};

class StageRun {
 public:
  StageRun(StageId stage, const Workspace& ws, const PipelineConfig& config)
      : stage_(stage), ws_(ws), config_(config) {
    summary_.stage = stage;
  }

  template <typename PerTrial>
  void for_each_trial(std::string_view program, PerTrial&& body) {
    for (char c : config_.evaluation.alphabet) {
      for (int t = 1; t <= config_.evaluation.trials; ++t) {
        if (auto why = body(c, t)) {
          failures_.push_back({c, t, std::move(*why)});
          ++summary_.failed;
        } else {
          ++summary_.ok;
        }
      }
    }
    flush_failures(program);
  }

  StageSummary summary() const { return summary_; }

 private:
  void flush_failures(std::string_view program) {
    const auto path = ws_.scores_path(program, "failures.csv");
    std::vector<std::tuple<int, int, int, std::vector<std::string>>> rows;
    const auto stage_index = [](std::string_view name) {
      for (int s = 0; s < static_cast<int>(std::size(kStages)); ++s) {
        if (to_string(kStages[s]) == name) return s;
      }
      return static_cast<int>(std::size(kStages));
    };
    const auto char_index = [this](const std::string& field) {
      if (field.size() != 1) return config_.evaluation.characters();
      return config_.evaluation.find(field[0]).value_or(config_.evaluation.characters());
    };

    if (auto existing = read_if_exists(path)) {
      auto parsed = parse_csv(*existing);
      for (std::size_t r = 1; r < parsed.size(); ++r) {
        auto& row = parsed[r];
        if (row.size() != 4 || row[0] == to_string(stage_)) continue;
        rows.emplace_back(stage_index(row[0]), char_index(row[1]), to_int(row[2]).value_or(0), std::move(row));
      }
    }
    for (auto& f : failures_) {
      rows.emplace_back(stage_index(to_string(stage_)), char_index(std::string(1, f.character)), f.trial,
                        std::vector<std::string>{std::string(to_string(stage_)), std::string(1, f.character),
                                                 trial_label(f.trial), std::move(f.reason)});
    }
    failures_.clear();
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
             std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
    });

    std::string out = "stage,character,trial,reason\n";
    for (const auto& row : rows) {
      const auto& f = std::get<3>(row);
      out += fmt::format("{},{},{},{}\n", csv_field(f[0]), csv_field(f[1]), csv_field(f[2]), csv_field(f[3]));
    }
    write_file(path, out);
  }

  StageId stage_;
  const Workspace& ws_;
  const PipelineConfig& config_;
  StageSummary summary_;
  std::vector<Failure> failures_;
};

using TrialKey = std::pair<char, int>;

std::map<TrialKey, double> read_stability(const Workspace& ws, std::string_view program) {
  std::map<TrialKey, double> out;
  auto text = read_if_exists(ws.scores_path(program, "stability.csv"));
  if (!text) return out;
  auto rows = parse_csv(*text);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 5 || row[0].size() != 1) continue;
    auto trial = to_int(row[1]);
    auto sta = to_double(row[4]);
    if (trial && sta) out[{row[0][0], *trial}] = *sta;
  }
  return out;
}

std::map<TrialKey, ProbabilityVector> read_probabilities(const Workspace& ws, std::string_view program,
                                                         int characters) {
  std::map<TrialKey, ProbabilityVector> out;
  auto text = read_if_exists(ws.scores_path(program, "probabilities.csv"));
  if (!text) return out;
  auto rows = parse_csv(*text);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != static_cast<std::size_t>(characters) + 2 || row[0].size() != 1) continue;
    auto trial = to_int(row[1]);
    if (!trial) continue;
    ProbabilityVector v;
    for (std::size_t c = 2; c < row.size(); ++c) {
      auto p = to_double(row[c]);
      if (!p) break;
      v.v.push_back(*p);
    }
    if (v.v.size() == static_cast<std::size_t>(characters)) out[{row[0][0], *trial}] = std::move(v);
  }
  return out;
}

std::string fixed(double v, int decimals) {
  auto s = fmt::format("{:.{}f}", v, decimals);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::unique_ptr<Classifier> make_classifier(const PipelineConfig& config) {
  const auto& cfg = config.classifier;
  if (cfg.mode == ClassifierMode::external_logits) {
    if (cfg.logits_file.empty()) throw ConfigError("classifier.mode = external needs classifier.logits_file");
    if (!fs::is_regular_file(cfg.logits_file)) {
      throw ConfigError(fmt::format("logits file {} does not exist", cfg.logits_file.string()));
    }
    return std::make_unique<ExternalLogitsClassifier>(
        load_external_logits(cfg.logits_file, config.evaluation.characters()));
  }
  const auto dir = cfg.templates_dir.empty() ? default_fixtures_dir() / "characters" : cfg.templates_dir;
  return std::make_unique<TemplateClassifier>(build_template_set(dir, config.evaluation.alphabet, config.grid,
                                                                 config.raster),
                                              cfg.alpha);
}

fs::path templates_dir(const PipelineConfig& config) {
  return config.classifier.templates_dir.empty() ? default_fixtures_dir() / "characters"
                                                 : config.classifier.templates_dir;
}

// --- stages ---

StageSummary stage_extract(const Workspace& ws, const PipelineConfig& config) {
  StageRun run(StageId::extract, ws, config);
  for (const auto& program : ws.programs()) {
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      const auto out = ws.code_path(program, c, t);
      auto text = read_if_exists(ws.response_path(program, c, t));
      if (!text) {
        remove_if_exists(out);
        return "missing response";
      }
      auto result = extract_program(*text, config.grammar);
      if (!result.ok()) {
        remove_if_exists(out);
        std::string reason(to_string(result.status));
        if (!result.diagnostics.empty()) reason += ": " + result.diagnostics.front();
        return reason;
      }
      write_file(out, format_program(result.calls));
      return std::nullopt;
    });
  }
  return run.summary();
}

StageSummary stage_convert(const Workspace& ws, const PipelineConfig& config) {
  StageRun run(StageId::convert, ws, config);
  for (const auto& program : ws.programs()) {
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      const auto out = ws.level_path(program, c, t);
      auto code = read_if_exists(ws.code_path(program, c, t));
      if (!code) {
        remove_if_exists(out);
        return "missing code";
      }
      auto parsed = parse_drop_calls(*code, GrammarMode::strict);
      if (!parsed.ok()) {
        remove_if_exists(out);
        return fmt::format("code does not parse: {}", to_string(parsed.status));
      }
      const auto outcome = settle(parsed.calls, config.grid);
      write_file(out, level_to_xml(outcome.level, config.xml));
      return std::nullopt;
    });
  }
  return run.summary();
}

std::optional<Level> read_level(const fs::path& path, const PipelineConfig& config, std::string& why) {
  auto doc = read_if_exists(path);
  if (!doc) {
    why = "missing level";
    return std::nullopt;
  }
  try {
    return xml_to_level(*doc, config.xml);
  } catch (const ParseError& e) {
    why = e.what();
    return std::nullopt;
  }
}

StageSummary stage_stabilize(const Workspace& ws, const PipelineConfig& config) {
  StageRun run(StageId::stabilize, ws, config);
  for (const auto& program : ws.programs()) {
    std::string csv = "character,trial,total_blocks,moving_blocks,sta\n";
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      std::string why;
      auto level = read_level(ws.level_path(program, c, t), config, why);
      if (!level) return why;
      const auto report = assess_stability(*level);
      csv += fmt::format("{},{},{},{},{}\n", c, trial_label(t), report.total_blocks, report.moving_blocks, report.sta);
      return std::nullopt;
    });
    write_file(ws.scores_path(program, "stability.csv"), csv);
  }
  return run.summary();
}

StageSummary stage_render(const Workspace& ws, const PipelineConfig& config) {
  StageRun run(StageId::render, ws, config);
  for (const auto& program : ws.programs()) {
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      const auto out = ws.image_path(program, c, t);
      std::string why;
      auto level = read_level(ws.level_path(program, c, t), config, why);
      if (!level) {
        remove_if_exists(out);
        return why;
      }
      write_file(out, encode_pgm(rasterize(*level, config.raster)));
      return std::nullopt;
    });
  }
  return run.summary();
}

StageSummary stage_classify(const Workspace& ws, const PipelineConfig& config) {
  const auto classifier = make_classifier(config);
  StageRun run(StageId::classify, ws, config);
  for (const auto& program : ws.programs()) {
    std::string csv = "character,trial";
    for (char c : config.evaluation.alphabet) csv += fmt::format(",{}", c);
    csv += '\n';
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      auto bytes = read_if_exists(ws.image_path(program, c, t));
      if (!bytes) return "missing image";
      Bitmap image;
      try {
        image = decode_pgm(*bytes);
      } catch (const ParseError& e) {
        return e.what();
      }
      const auto local_id = fmt::format("{}/{}.pgm", c, trial_label(t));
      auto logits = classifier->classify(image, fmt::format("{}/{}", program, local_id));
      if (!logits) logits = classifier->classify(image, local_id);
      if (!logits) return fmt::format("no logits for {}/{}", program, local_id);
      const auto v = softmax(*logits);
      csv += fmt::format("{},{}", c, trial_label(t));
      for (double p : v.v) csv += fmt::format(",{}", p);
      csv += '\n';
      return std::nullopt;
    });
    write_file(ws.scores_path(program, "probabilities.csv"), csv);
  }
  return run.summary();
}

StageSummary stage_diversity(const Workspace& ws, const PipelineConfig& config) {
  StageRun run(StageId::diversity, ws, config);
  for (const auto& program : ws.programs()) {
    const auto vectors = read_probabilities(ws, program, config.evaluation.characters());
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      if (vectors.count({c, t}) == 0) return "missing probabilities";
      return std::nullopt;
    });
    std::string csv = "character,div\n";
    for (char c : config.evaluation.alphabet) {
      std::vector<ProbabilityVector> set;
      for (int t = 1; t <= config.evaluation.trials; ++t) {
        if (auto it = vectors.find({c, t}); it != vectors.end()) set.push_back(it->second);
      }
      csv += fmt::format("{},{}\n", c, diversity(set, config.evaluation.trials));
    }
    write_file(ws.scores_path(program, "diversity.csv"), csv);
  }
  return run.summary();
}

StageSummary stage_score(const Workspace& ws, const PipelineConfig& config) {
  auto report = compute_report(ws, config);
  StageRun run(StageId::score, ws, config);
  const auto programs = ws.programs();
  for (std::size_t k = 0; k < programs.size(); ++k) {
    const auto& program = programs[k];
    const auto sta = read_stability(ws, program);
    const auto probs = read_probabilities(ws, program, config.evaluation.characters());
    std::string csv = "character,trial,status,sta,sim\n";
    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      const int j = config.evaluation.index_of(c);
      auto s = sta.find({c, t});
      auto p = probs.find({c, t});
      const bool ok = s != sta.end() && p != probs.end();
      csv += fmt::format("{},{},{},{},{}\n", c, trial_label(t), ok ? "ok" : "failed", ok ? s->second : 0.0,
                         ok ? similarity(p->second, j) : 0.0);
      if (ok) return std::nullopt;
      return s == sta.end() ? "missing stability" : "missing probabilities";
    });
    write_file(ws.scores_path(program, "raw.csv"), csv);
  }
  emit_report(report, ws.report_dir());
  return run.summary();
}

}  // namespace

std::string_view to_string(StageId stage) {
  switch (stage) {
    case StageId::gather: return "gather";
    case StageId::extract: return "extract";
    case StageId::convert: return "convert";
    case StageId::stabilize: return "stabilize";
    case StageId::render: return "render";
    case StageId::classify: return "classify";
    case StageId::diversity: return "diversity";
    case StageId::score: return "score";
  }
  return "extract";
}

std::optional<StageId> stage_from_name(std::string_view name) {
  for (auto s : kStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Workspace::Workspace(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  if (!fs::is_directory(root_, ec)) throw Error(fmt::format("workspace {} is not a directory", root_.string()));
}

std::vector<std::string> Workspace::programs() const {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_, ec)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_directory() || name == "report" || name.empty() || name.front() == '.') continue;
    names.push_back(name);
  }
  if (ec) throw Error(fmt::format("cannot list workspace {}: {}", root_.string(), ec.message()));
  std::sort(names.begin(), names.end());
  return names;
}

fs::path Workspace::program_dir(std::string_view program) const { return root_ / std::string(program); }

namespace {
fs::path trial_file(const Workspace& ws, std::string_view program, std::string_view kind, char character, int trial,
                    std::string_view ext) {
  return ws.program_dir(program) / std::string(kind) / std::string(1, character) /
         fmt::format("{}.{}", trial_label(trial), ext);
}
}  // namespace

fs::path Workspace::response_path(std::string_view program, char character, int trial) const {
  return trial_file(*this, program, "responses", character, trial, "txt");
}
fs::path Workspace::transcript_path(std::string_view program, char character, int trial) const {
  return trial_file(*this, program, "transcripts", character, trial, "json");
}
fs::path Workspace::code_path(std::string_view program, char character, int trial) const {
  return trial_file(*this, program, "code", character, trial, "txt");
}
fs::path Workspace::level_path(std::string_view program, char character, int trial) const {
  return trial_file(*this, program, "levels", character, trial, "xml");
}
fs::path Workspace::image_path(std::string_view program, char character, int trial) const {
  return trial_file(*this, program, "images", character, trial, "pgm");
}
fs::path Workspace::scores_path(std::string_view program, std::string_view file) const {
  return program_dir(program) / "scores" / std::string(file);
}

StageSummary gather(const Workspace& ws, const PipelineConfig& config, const GatherOptions& options) {
  StageRun run(StageId::gather, ws, config);
  const auto fixtures = default_fixtures_dir();

  for (const auto& program : ws.programs()) {
    if (options.program && *options.program != program) continue;
    const auto pdir = ws.program_dir(program);

    auto prompt_text = [&](const fs::path& configured, std::string_view name, bool required) -> std::string {
      for (const auto& candidate : {configured, pdir / "prompts" / fmt::format("{}.txt", name),
                                    fixtures / "prompts" / fmt::format("{}.txt", name)}) {
        if (!candidate.empty() && fs::is_regular_file(candidate)) return read_text_file(candidate);
      }
      if (required) throw ConfigError(fmt::format("no {} prompt for program {}", name, program));
      return {};
    };

    StrategyPrompts prompts;
    prompts.task_prompt = prompt_text(config.strategy.task_prompt, "task", true);
    prompts.format_prompt = prompt_text(config.strategy.format_prompt, "format", false);
    prompts.tot.task_prompt = prompts.task_prompt;
    prompts.tot.eval_prompt = prompt_text(config.strategy.eval_prompt, "eval", false);
    prompts.tot.final_prompt = prompt_text(config.strategy.final_prompt, "final", false);
    prompts.tot.max_depth = config.strategy.max_depth;
    prompts.tot.branching = config.strategy.branching;
    if (config.strategy.strategy == Strategy::few_shot) {
      for (char c : config.strategy.example_characters) {
        prompts.examples.push_back({c, format_program(load_character_program(templates_dir(config), c))});
      }
    }

    ManualClock mock_clock;
    SteadyClock wall_clock;
    std::unique_ptr<Provider> live;
    std::optional<ScriptedProvider> mock;
    if (options.provider == GatherOptions::ProviderKind::live) {
      live = make_live_provider(config.provider.live);
    } else {
      const auto script = config.provider.mock_script.empty() ? pdir / "mock_script.json" : config.provider.mock_script;
      mock.emplace(ScriptedProvider::from_json(read_text_file(script), &mock_clock));
    }
    Provider& provider = live ? *live : static_cast<Provider&>(*mock);
    const Clock& clock = live ? static_cast<const Clock&>(wall_clock) : mock_clock;

    run.for_each_trial(program, [&](char c, int t) -> std::optional<std::string> {
      if (mock) mock->start_trial(c, t);
      const auto record =
          run_strategy(config.strategy.strategy, {program, c, t}, prompts, provider, config.budgets, clock);
      write_file(ws.response_path(program, c, t), record.final_response);
      write_file(ws.transcript_path(program, c, t), record.to_json());
      if (record.status == TrialOutcome::ok) return std::nullopt;
      return fmt::format("{}: {}", to_string(record.status), record.error);
    });
  }
  return run.summary();
}

StageSummary run_stage(StageId stage, const Workspace& ws, const PipelineConfig& config) {
  config.validate();
  switch (stage) {
    case StageId::gather: return gather(ws, config);
    case StageId::extract: return stage_extract(ws, config);
    case StageId::convert: return stage_convert(ws, config);
    case StageId::stabilize: return stage_stabilize(ws, config);
    case StageId::render: return stage_render(ws, config);
    case StageId::classify: return stage_classify(ws, config);
    case StageId::diversity: return stage_diversity(ws, config);
    case StageId::score: return stage_score(ws, config);
  }
  throw ConfigError("unknown stage");
}

RunResult run_all(const Workspace& ws, const PipelineConfig& config) {
  RunResult result;
  for (auto stage : {StageId::extract, StageId::convert, StageId::stabilize, StageId::render, StageId::classify,
                     StageId::diversity, StageId::score}) {
    result.stages.push_back(run_stage(stage, ws, config));
  }
  result.report = compute_report(ws, config);
  return result;
}

RankedReport compute_report(const Workspace& ws, const PipelineConfig& config) {
  const auto programs = ws.programs();
  if (programs.empty()) throw Error(fmt::format("workspace {} has no program directories", ws.root().string()));

  ScoreTable table(config.evaluation, programs);
  for (int k = 0; k < static_cast<int>(programs.size()); ++k) {
    const auto sta = read_stability(ws, programs[static_cast<std::size_t>(k)]);
    auto probs = read_probabilities(ws, programs[static_cast<std::size_t>(k)], config.evaluation.characters());
    for (int j = 0; j < config.evaluation.characters(); ++j) {
      const char c = config.evaluation.character_at(j);
      for (int i = 0; i < config.evaluation.trials; ++i) {
        auto s = sta.find({c, i + 1});
        auto p = probs.find({c, i + 1});
        if (s != sta.end() && p != probs.end()) {
          table.set_ok(i, j, k, s->second, std::move(p->second));
        } else {
          table.set_failed(i, j, k);
        }
      }
    }
  }
  return score_table(table);
}

std::string ranking_csv(const RankedReport& report) {
  std::string out = "program,prompt,norm_prompt,rank\n";
  for (int k : report.order_by_rank()) {
    const auto& p = report.programs[static_cast<std::size_t>(k)];
    out += fmt::format("{},{},{},{}\n", csv_field(p.name), fixed(p.prompt, 8), fixed(p.norm_prompt, 6), p.rank);
  }
  return out;
}

std::string ranking_markdown(const RankedReport& report) {
  std::string out = "| Rank | Program | norm_prompt | prompt |\n|---:|:---|---:|---:|\n";
  for (int k : report.order_by_rank()) {
    const auto& p = report.programs[static_cast<std::size_t>(k)];
    std::string name = p.name;
    for (std::size_t pos = 0; (pos = name.find('|', pos)) != std::string::npos; pos += 2) name.insert(pos, "\\");
    out += fmt::format("| {} | {} | {} | {} |\n", p.rank, name, fixed(p.norm_prompt, 4), fixed(p.prompt, 4));
  }
  return out;
}

void emit_report(const RankedReport& report, const fs::path& report_dir) {
  write_file(report_dir / "ranking.csv", ranking_csv(report));
  write_file(report_dir / "ranking.md", ranking_markdown(report));
  if (report.trial_scores.empty()) return;

  const auto& cfg = report.config;
  std::string scores = "program,character,trial,trial_score,char_score,div,weight\n";
  for (int k = 0; k < cfg.programs; ++k) {
    for (int j = 0; j < cfg.characters(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const auto kk = static_cast<std::size_t>(k);
      for (int i = 0; i < cfg.trials; ++i) {
        scores += fmt::format("{},{},{},{},{},{},{}\n", csv_field(report.programs[kk].name), cfg.character_at(j),
                              trial_label(i + 1), fixed(report.trial(i, j, k), 8), fixed(report.char_scores[jj][kk], 8),
                              fixed(report.div[jj][kk], 8), fixed(report.weights.weight[jj], 8));
      }
    }
  }
  write_file(report_dir / "scores.csv", scores);

  std::string weights = "character,w_sta,w_sim,w_div,weight\n";
  for (int j = 0; j < cfg.characters(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    weights += fmt::format("{},{},{},{},{}\n", cfg.character_at(j), fixed(report.weights.w_sta[jj], 8),
                           fixed(report.weights.w_sim[jj], 8), fixed(report.weights.w_div[jj], 8),
                           fixed(report.weights.weight[jj], 8));
  }
  write_file(report_dir / "weights.csv", weights);
}

RankedReport rank_prompt_scores(std::string_view csv_text) {
  std::vector<std::string> names;
  std::vector<double> scores;
  const auto rows = parse_csv(csv_text);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() < 2) throw ParseError(fmt::format("prompt score row {} needs program,prompt", r + 1));
    auto value = to_double(row[1]);
    if (!value) {
      if (r == 0) continue;
      throw ParseError(fmt::format("prompt score row {}: '{}' is not a number", r + 1, row[1]));
    }
    if (*value < 0.0) throw ParseError(fmt::format("prompt score row {} is negative", r + 1));
    names.push_back(row[0]);
    scores.push_back(*value);
  }
  RankedReport report;
  report.config.programs = static_cast<int>(scores.size());
  report.programs = normalize_and_rank(scores, names);
  return report;
}

}  // namespace pcgeval
