#pragma once

// Scoring: stability/similarity per trial, diversity per (character, program),
// difficulty weights per character, and the prompt-level ranking.
//
// Index convention throughout: i = trial, j = character, k = program.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcgeval/classify.hpp"
#include "pcgeval/core_model.hpp"

namespace pcgeval {

// [j][k] matrices (character-major) used for div and char scores.
using CharProgramMatrix = std::vector<std::vector<double>>;

enum class TrialStatus { ok, failed };

struct TrialResult {
  TrialStatus status = TrialStatus::failed;
  double sta = 0.0;
  double sim = 0.0;
  std::optional<ProbabilityVector> vector;  // member of the diversity set when present
};

class ScoreTable {
 public:
  ScoreTable(EvaluationConfig config, std::vector<std::string> program_names);

  const EvaluationConfig& config() const { return config_; }
  const std::vector<std::string>& program_names() const { return programs_; }

  TrialResult& at(int trial, int character, int program);
  const TrialResult& at(int trial, int character, int program) const;

  // Records a successful trial; sim is read off the vector at the target character.
  void set_ok(int trial, int character, int program, double sta, ProbabilityVector v);
  void set_failed(int trial, int character, int program);

  // Vectors of the non-failed trials for (j, k), in trial order.
  std::vector<ProbabilityVector> diversity_set(int character, int program) const;

 private:
  std::size_t offset(int trial, int character, int program) const;

  EvaluationConfig config_;
  std::vector<std::string> programs_;
  std::vector<TrialResult> cells_;
};

double similarity(const ProbabilityVector& v, int target_index);

// 1 - cos(u, v); 0 when either vector has zero norm.
double cosine_distance(const ProbabilityVector& u, const ProbabilityVector& v);

// Maximum number of index-distinct unordered pairs among T trials,
// 0.5*T*(T+1) - T.
long pair_denominator(int trials);

// Sum of pairwise cosine distances over the present vectors, divided by the
// pair count for the full T trials. Missing (failed) trials lower the score.
double diversity(std::span<const ProbabilityVector> vectors, int trials);

struct Weights {
  std::vector<double> w_sta;
  std::vector<double> w_sim;
  std::vector<double> w_div;
  std::vector<double> weight;  // product of the three factors
};

// Each factor is max(1 - field mean, 1/C); w_div averages over programs only.
Weights character_weights(const ScoreTable& table, const CharProgramMatrix& div);

double trial_score(double weight, double sta, double sim);

// div times the mean over all T trial scores (failed trials count as 0).
double character_score(double div, std::span<const double> trial_scores);

struct ProgramRanking {
  std::string name;
  double prompt = 0.0;
  double norm_prompt = 0.0;  // percent of the field total
  int rank = 1;
};

// Competition ("1224") ranks, descending; equal scores share the smallest rank.
std::vector<int> competition_ranks(std::span<const double> scores);

// Percentage normalisation plus ranks, in input order. All-zero input gives
// all norms 0 and a shared rank 1.
std::vector<ProgramRanking> normalize_and_rank(std::span<const double> prompt_scores,
                                               std::span<const std::string> names = {});

struct RankedReport {
  EvaluationConfig config;
  std::vector<ProgramRanking> programs;  // input (program) order
  CharProgramMatrix div;                 // [j][k]
  CharProgramMatrix char_scores;         // [j][k]
  std::vector<double> trial_scores;      // [k][j][i] flattened
  Weights weights;

  double trial(int i, int j, int k) const;
  // Program indices sorted by rank, ties in input order.
  std::vector<int> order_by_rank() const;
};

// prompt_k = mean over characters of char_jk, then normalize_and_rank.
RankedReport aggregate_and_rank(const CharProgramMatrix& char_scores, const EvaluationConfig& config,
                                std::span<const std::string> names = {});

// Full scoring pass over a complete table: div, weights, trial, char, ranking.
RankedReport score_table(const ScoreTable& table);

}  // namespace pcgeval
