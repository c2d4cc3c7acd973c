#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pcgeval/fixtures.hpp"
#include "pcgeval/pipeline.hpp"

namespace fs = std::filesystem;
using namespace pcgeval;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitTrialFailures = 2;

struct GlobalOptions {
  std::string workspace = ".";
  std::optional<int> trials;
  std::string config;
};

PipelineConfig resolve_config(const GlobalOptions& g) {
  PipelineConfig cfg;
  if (!g.config.empty()) {
    cfg = load_config(g.config);
  } else if (const auto local = fs::path(g.workspace) / "pcgeval.ini"; fs::is_regular_file(local)) {
    cfg = load_config(local);
  }
  if (g.trials) cfg.evaluation.trials = *g.trials;
  cfg.validate();
  return cfg;
}

void print_summary(const StageSummary& s) {
  fmt::print("{:<10} ok={} failed={}\n", to_string(s.stage), s.ok, s.failed);
}

int exit_for(const std::vector<StageSummary>& summaries) {
  for (const auto& s : summaries) {
    if (s.failed > 0) return kExitTrialFailures;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate prompt programs that make an LLM build letter-shaped block structures."};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--workspace,-w", g.workspace, "Workspace root (one directory per program)");
  app.add_option("--trials,-t", g.trials, "Trials per character (overrides the config)")->check(CLI::PositiveNumber);
  app.add_option("--config,-c", g.config, "INI config file (default: <workspace>/pcgeval.ini if present)")
      ->check(CLI::ExistingFile);

  GatherOptions gather_opts;
  std::string provider = "mock";
  std::string strategy;
  std::string only_program;
  auto* gather_cmd = app.add_subcommand("gather", "Run the prompting strategy and write responses");
  gather_cmd->add_option("--provider", provider, "mock or live")->check(CLI::IsMember({"mock", "live"}));
  gather_cmd->add_option("--strategy", strategy, "zero_shot, zero_shot_multi_turn, few_shot or tot_bfs");
  gather_cmd->add_option("--program", only_program, "Only this program directory");

  std::vector<std::pair<StageId, CLI::App*>> stage_cmds;
  for (auto stage : {StageId::extract, StageId::convert, StageId::stabilize, StageId::render, StageId::classify,
                     StageId::diversity, StageId::score}) {
    stage_cmds.emplace_back(stage, app.add_subcommand(std::string(to_string(stage)),
                                                      fmt::format("Run the {} stage", to_string(stage))));
  }
  auto* run_all_cmd = app.add_subcommand("run-all", "extract through score, then print the ranking");

  std::string prompts_csv;
  auto* report_cmd = app.add_subcommand("report", "Write ranking.csv and ranking.md");
  report_cmd->add_option("--prompts", prompts_csv, "Rank a program,prompt CSV instead of the workspace scores")
      ->check(CLI::ExistingFile);
  std::string out_dir;
  report_cmd->add_option("--out", out_dir, "Output directory (default: <workspace>/report)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*report_cmd && !prompts_csv.empty()) {
      const auto report = rank_prompt_scores(read_text_file(prompts_csv));
      emit_report(report, out_dir.empty() ? fs::path(g.workspace) / "report" : fs::path(out_dir));
      fmt::print("{}", ranking_markdown(report));
      return kExitOk;
    }

    const auto cfg_base = resolve_config(g);
    const Workspace ws(g.workspace);

    if (*gather_cmd) {
      auto cfg = cfg_base;
      if (!strategy.empty()) {
        auto s = strategy_from_name(strategy);
        if (!s) throw ConfigError(fmt::format("unknown strategy '{}'", strategy));
        cfg.strategy.strategy = *s;
      }
      gather_opts.provider = provider == "live" ? GatherOptions::ProviderKind::live : GatherOptions::ProviderKind::mock;
      if (!only_program.empty()) gather_opts.program = only_program;
      const auto summary = gather(ws, cfg, gather_opts);
      print_summary(summary);
      return exit_for({summary});
    }
    for (const auto& [stage, cmd] : stage_cmds) {
      if (!*cmd) continue;
      const auto summary = run_stage(stage, ws, cfg_base);
      print_summary(summary);
      return exit_for({summary});
    }
    if (*run_all_cmd) {
      const auto result = run_all(ws, cfg_base);
      for (const auto& s : result.stages) print_summary(s);
      fmt::print("\n{}", ranking_markdown(result.report));
      return exit_for(result.stages);
    }
    if (*report_cmd) {
      const auto report = compute_report(ws, cfg_base);
      emit_report(report, out_dir.empty() ? ws.report_dir() : fs::path(out_dir));
      fmt::print("{}", ranking_markdown(report));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "pcgeval: {}\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
