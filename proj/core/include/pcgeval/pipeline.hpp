#pragma once

// Stage orchestration over a workspace directory:
//
//   <root>/<program>/responses/<C>/<tt>.txt     raw model replies (gather)
//   <root>/<program>/transcripts/<C>/<tt>.json  harness records (gather)
//   <root>/<program>/code/<C>/<tt>.txt          extracted drop_block programs
//   <root>/<program>/levels/<C>/<tt>.xml        settled levels
//   <root>/<program>/images/<C>/<tt>.pgm        rendered structures
//   <root>/<program>/scores/{stability,probabilities,diversity,raw,failures}.csv
//   <root>/report/{scores,weights,ranking}.csv, ranking.md
//
// A missing input at any stage fails that trial only; the run continues and
// the trial scores zero.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcgeval/config.hpp"
#include "pcgeval/metrics.hpp"

namespace pcgeval {

enum class StageId { gather, extract, convert, stabilize, render, classify, diversity, score };

std::string_view to_string(StageId stage);
std::optional<StageId> stage_from_name(std::string_view name);

struct StageSummary {
  StageId stage = StageId::extract;
  int ok = 0;
  int failed = 0;
};

class Workspace {
 public:
  // Throws Error when root is not a readable directory.
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  // Program directories in lexicographic order; "report" and dot-dirs are skipped.
  std::vector<std::string> programs() const;

  std::filesystem::path program_dir(std::string_view program) const;
  std::filesystem::path response_path(std::string_view program, char character, int trial) const;
  std::filesystem::path transcript_path(std::string_view program, char character, int trial) const;
  std::filesystem::path code_path(std::string_view program, char character, int trial) const;
  std::filesystem::path level_path(std::string_view program, char character, int trial) const;
  std::filesystem::path image_path(std::string_view program, char character, int trial) const;
  std::filesystem::path scores_path(std::string_view program, std::string_view file) const;
  std::filesystem::path report_dir() const { return root_ / "report"; }

 private:
  std::filesystem::path root_;
};

struct GatherOptions {
  enum class ProviderKind { mock, live } provider = ProviderKind::mock;
  std::optional<std::string> program;  // only this program when set
};

// Runs the configured strategy for every (program, character, trial) and
// writes responses and transcripts. Non-ok trials leave an empty response.
StageSummary gather(const Workspace& workspace, const PipelineConfig& config, const GatherOptions& options = {});

// Runs one stage from extract to score. gather needs gather().
StageSummary run_stage(StageId stage, const Workspace& workspace, const PipelineConfig& config);

struct RunResult {
  std::vector<StageSummary> stages;
  RankedReport report;
};

// extract -> convert -> stabilize -> render -> classify -> diversity -> score.
RunResult run_all(const Workspace& workspace, const PipelineConfig& config);

// Reads the per-program score files and returns the ranked report without writing anything.
RankedReport compute_report(const Workspace& workspace, const PipelineConfig& config);

// ranking.csv, ranking.md, and (when the report has trial data) scores.csv and weights.csv.
void emit_report(const RankedReport& report, const std::filesystem::path& report_dir);

std::string ranking_csv(const RankedReport& report);
std::string ranking_markdown(const RankedReport& report);

// "program,prompt" rows (header optional) -> ranking of those scores alone.
RankedReport rank_prompt_scores(std::string_view csv_text);

}  // namespace pcgeval
