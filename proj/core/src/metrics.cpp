#include "pcgeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace pcgeval {

ScoreTable::ScoreTable(EvaluationConfig config, std::vector<std::string> program_names)
    : config_(std::move(config)), programs_(std::move(program_names)) {
  config_.programs = static_cast<int>(programs_.size());
  config_.validate();
  cells_.resize(static_cast<std::size_t>(config_.trials) * static_cast<std::size_t>(config_.characters()) *
                programs_.size());
}

std::size_t ScoreTable::offset(int trial, int character, int program) const {
  if (trial < 0 || trial >= config_.trials || character < 0 || character >= config_.characters() || program < 0 ||
      program >= config_.programs) {
    throw ConfigError(fmt::format("score table index ({}, {}, {}) out of range", trial, character, program));
  }
  return (static_cast<std::size_t>(program) * static_cast<std::size_t>(config_.characters()) +
          static_cast<std::size_t>(character)) *
             static_cast<std::size_t>(config_.trials) +
         static_cast<std::size_t>(trial);
}

TrialResult& ScoreTable::at(int trial, int character, int program) { return cells_[offset(trial, character, program)]; }

const TrialResult& ScoreTable::at(int trial, int character, int program) const {
  return cells_[offset(trial, character, program)];
}

void ScoreTable::set_ok(int trial, int character, int program, double sta, ProbabilityVector v) {
  auto& cell = at(trial, character, program);
  cell.status = TrialStatus::ok;
  cell.sta = sta;
  cell.sim = similarity(v, character);
  cell.vector = std::move(v);
}

void ScoreTable::set_failed(int trial, int character, int program) { at(trial, character, program) = TrialResult{}; }

std::vector<ProbabilityVector> ScoreTable::diversity_set(int character, int program) const {
  std::vector<ProbabilityVector> set;
  for (int i = 0; i < config_.trials; ++i) {
    const auto& cell = at(i, character, program);
    if (cell.status == TrialStatus::ok && cell.vector) set.push_back(*cell.vector);
  }
  return set;
}

double similarity(const ProbabilityVector& v, int target_index) {
  if (target_index < 0 || static_cast<std::size_t>(target_index) >= v.v.size()) {
    throw ConfigError(fmt::format("target index {} outside vector of {}", target_index, v.v.size()));
  }
  return v.v[static_cast<std::size_t>(target_index)];
}

double cosine_distance(const ProbabilityVector& u, const ProbabilityVector& v) {
  if (u.v.size() != v.v.size()) {
    throw ConfigError(fmt::format("cosine distance of vectors with {} and {} entries", u.v.size(), v.v.size()));
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t c = 0; c < u.v.size(); ++c) {
    dot += u.v[c] * v.v[c];
    uu += u.v[c] * u.v[c];
    vv += v.v[c] * v.v[c];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  // sqrt(uu * uu) == uu exactly, so identical vectors give exactly 0.
  return std::max(0.0, 1.0 - dot / std::sqrt(uu * vv));
}

long pair_denominator(int trials) {
  const long t = trials;
  return t * (t + 1) / 2 - t;
}

double diversity(std::span<const ProbabilityVector> vectors, int trials) {
  if (trials < 2) throw ConfigError(fmt::format("diversity needs T >= 2, got {}", trials));
  if (vectors.size() > static_cast<std::size_t>(trials)) {
    throw ConfigError(fmt::format("{} vectors for only {} trials", vectors.size(), trials));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < vectors.size(); ++a) {
    for (std::size_t b = a + 1; b < vectors.size(); ++b) total += cosine_distance(vectors[a], vectors[b]);
  }
  return total / static_cast<double>(pair_denominator(trials));
}

Weights character_weights(const ScoreTable& table, const CharProgramMatrix& div) {
  const auto& cfg = table.config();
  const int C = cfg.characters();
  const int P = cfg.programs;
  const int T = cfg.trials;
  if (div.size() != static_cast<std::size_t>(C)) throw ConfigError("diversity matrix has wrong character count");
  const double floor = 1.0 / C;

  Weights w;
  for (int j = 0; j < C; ++j) {
    if (div[static_cast<std::size_t>(j)].size() != static_cast<std::size_t>(P)) {
      throw ConfigError("diversity matrix has wrong program count");
    }
    double sta_sum = 0.0, sim_sum = 0.0, div_sum = 0.0;
    for (int k = 0; k < P; ++k) {
      for (int i = 0; i < T; ++i) {
        sta_sum += table.at(i, j, k).sta;
        sim_sum += table.at(i, j, k).sim;
      }
      div_sum += div[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
    }
    w.w_sta.push_back(std::max(1.0 - sta_sum / (P * T), floor));
    w.w_sim.push_back(std::max(1.0 - sim_sum / (P * T), floor));
    w.w_div.push_back(std::max(1.0 - div_sum / P, floor));
    w.weight.push_back(w.w_sta.back() * w.w_sim.back() * w.w_div.back());
  }
  return w;
}

double trial_score(double weight, double sta, double sim) { return weight * sta * sim; }

double character_score(double div, std::span<const double> trial_scores) {
  if (trial_scores.empty()) return 0.0;
  const double sum = std::accumulate(trial_scores.begin(), trial_scores.end(), 0.0);
  return div * sum / static_cast<double>(trial_scores.size());
}

std::vector<int> competition_ranks(std::span<const double> scores) {
  std::vector<int> ranks(scores.size(), 1);
  for (std::size_t a = 0; a < scores.size(); ++a) {
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (scores[b] > scores[a]) ++ranks[a];
    }
  }
  return ranks;
}

std::vector<ProgramRanking> normalize_and_rank(std::span<const double> prompt_scores,
                                               std::span<const std::string> names) {
  const double total = std::accumulate(prompt_scores.begin(), prompt_scores.end(), 0.0);
  std::vector<ProgramRanking> out(prompt_scores.size());
  std::vector<double> norms(prompt_scores.size(), 0.0);
  for (std::size_t k = 0; k < prompt_scores.size(); ++k) {
    out[k].name = k < names.size() ? names[k] : fmt::format("program{}", k + 1);
    out[k].prompt = prompt_scores[k];
    if (total > 0.0) norms[k] = 100.0 * prompt_scores[k] / total;
    out[k].norm_prompt = norms[k];
  }
  const auto ranks = competition_ranks(norms);
  for (std::size_t k = 0; k < out.size(); ++k) out[k].rank = ranks[k];
  return out;
}

double RankedReport::trial(int i, int j, int k) const {
  const auto T = static_cast<std::size_t>(config.trials);
  const auto C = static_cast<std::size_t>(config.characters());
  return trial_scores.at((static_cast<std::size_t>(k) * C + static_cast<std::size_t>(j)) * T +
                         static_cast<std::size_t>(i));
}

std::vector<int> RankedReport::order_by_rank() const {
  std::vector<int> order(programs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return programs[static_cast<std::size_t>(a)].rank < programs[static_cast<std::size_t>(b)].rank;
  });
  return order;
}

RankedReport aggregate_and_rank(const CharProgramMatrix& char_scores, const EvaluationConfig& config,
                                std::span<const std::string> names) {
  const auto C = static_cast<std::size_t>(config.characters());
  if (char_scores.size() != C) throw ConfigError("character score matrix has wrong character count");
  const std::size_t P = C == 0 ? 0 : char_scores.front().size();

  std::vector<double> prompt(P, 0.0);
  for (std::size_t k = 0; k < P; ++k) {
    for (std::size_t j = 0; j < C; ++j) {
      if (char_scores[j].size() != P) throw ConfigError("ragged character score matrix");
      prompt[k] += char_scores[j][k];
    }
    prompt[k] /= static_cast<double>(C);
  }

  RankedReport report;
  report.config = config;
  report.config.programs = static_cast<int>(P);
  report.char_scores = char_scores;
  report.programs = normalize_and_rank(prompt, names);
  return report;
}

RankedReport score_table(const ScoreTable& table) {
  const auto& cfg = table.config();
  const int C = cfg.characters();
  const int P = cfg.programs;
  const int T = cfg.trials;

  CharProgramMatrix div(static_cast<std::size_t>(C), std::vector<double>(static_cast<std::size_t>(P), 0.0));
  for (int j = 0; j < C; ++j) {
    for (int k = 0; k < P; ++k) {
      div[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = diversity(table.diversity_set(j, k), T);
    }
  }

  // Weights need every program's raw metrics; nothing below runs per program
  // until this is complete.
  const auto weights = character_weights(table, div);

  std::vector<double> trials(static_cast<std::size_t>(P) * static_cast<std::size_t>(C) * static_cast<std::size_t>(T));
  CharProgramMatrix chars(static_cast<std::size_t>(C), std::vector<double>(static_cast<std::size_t>(P), 0.0));
  for (int k = 0; k < P; ++k) {
    for (int j = 0; j < C; ++j) {
      const auto base = (static_cast<std::size_t>(k) * static_cast<std::size_t>(C) + static_cast<std::size_t>(j)) *
                        static_cast<std::size_t>(T);
      for (int i = 0; i < T; ++i) {
        const auto& cell = table.at(i, j, k);
        trials[base + static_cast<std::size_t>(i)] =
            trial_score(weights.weight[static_cast<std::size_t>(j)], cell.sta, cell.sim);
      }
      chars[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
          character_score(div[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)],
                          std::span<const double>(trials).subspan(base, static_cast<std::size_t>(T)));
    }
  }

  auto report = aggregate_and_rank(chars, cfg, table.program_names());
  report.div = std::move(div);
  report.trial_scores = std::move(trials);
  report.weights = weights;
  return report;
}

}  // namespace pcgeval
