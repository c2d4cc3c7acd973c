#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "pcgeval/metrics.hpp"

using namespace pcgeval;

namespace {

ProbabilityVector one_hot(int index, int size = 26) {
  ProbabilityVector v{std::vector<double>(static_cast<std::size_t>(size), 0.0)};
  v.v[static_cast<std::size_t>(index)] = 1.0;
  return v;
}

ProbabilityVector random_softmax(std::mt19937& rng, int size = 26) {
  std::normal_distribution<double> z(0.0, 3.0);
  Logits l;
  for (int c = 0; c < size; ++c) l.z.push_back(z(rng));
  return softmax(l);
}

}  // namespace

TEST_CASE("similarity reads the target entry") {
  ProbabilityVector uniform{std::vector<double>(26, 1.0 / 26)};
  CHECK(similarity(uniform, 4) == doctest::Approx(0.03846).epsilon(1e-4));
  CHECK(similarity(one_hot(3), 3) == 1.0);
  CHECK(similarity(one_hot(3), 2) == 0.0);
}

TEST_CASE("cosine distance") {
  const auto v = one_hot(0);
  CHECK(cosine_distance(v, v) == 0.0);
  CHECK(cosine_distance(one_hot(0), one_hot(1)) == 1.0);
  ProbabilityVector u{{1, 1, 0}}, w{{1, 0, 0}};
  CHECK(cosine_distance(u, w) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cosine_distance(u, w) == doctest::Approx(0.29289).epsilon(1e-4));
  std::mt19937 rng(3);
  for (int n = 0; n < 200; ++n) {
    const auto r = random_softmax(rng);
    CHECK(cosine_distance(r, r) == 0.0);
  }
}

TEST_CASE("diversity examples") {
  CHECK(pair_denominator(10) == 45);
  CHECK(pair_denominator(2) == 1);
  std::mt19937 rng(11);
  const auto r = random_softmax(rng);
  std::vector<ProbabilityVector> same(10, r);
  CHECK(diversity(same, 10) == 0.0);
  std::vector<ProbabilityVector> ortho{one_hot(0), one_hot(1), one_hot(2)};
  CHECK(diversity(ortho, 3) == 1.0);
  // Missing trials lower the score: two orthogonal vectors out of T = 3.
  std::vector<ProbabilityVector> two{one_hot(0), one_hot(1)};
  CHECK(diversity(two, 3) == doctest::Approx(1.0 / 3.0));
  CHECK(diversity(std::vector<ProbabilityVector>{}, 3) == 0.0);
  CHECK_THROWS_AS(diversity(ortho, 2), ConfigError);
  CHECK_THROWS_AS(diversity(two, 1), ConfigError);
}

TEST_CASE("diversity equals the brute-force oracle exactly") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> count(0, 5), extra(0, 5);
  for (int n = 0; n < 1000; ++n) {
    const int present = count(rng);
    const int trials = std::max(2, present + extra(rng));
    std::vector<ProbabilityVector> set;
    std::vector<std::vector<double>> raw;
    for (int i = 0; i < present; ++i) {
      set.push_back(random_softmax(rng));
      raw.push_back(set.back().v);
    }
    CHECK(diversity(set, trials) == oracle::diversity(raw, trials));
  }
}

TEST_CASE("character weights and the 1/C floor") {
  auto table_with = [](double sta, double sim_target) {
    EvaluationConfig cfg;
    cfg.trials = 2;
    ScoreTable table(cfg, {"p"});
    for (int j = 0; j < 26; ++j) {
      for (int i = 0; i < 2; ++i) {
        ProbabilityVector v{std::vector<double>(26, (1.0 - sim_target) / 25)};
        v.v[static_cast<std::size_t>(j)] = sim_target;
        table.set_ok(i, j, 0, sta, v);
      }
    }
    return table;
  };
  const CharProgramMatrix zero_div(26, std::vector<double>(1, 0.0));

  auto w = character_weights(table_with(1.0, 1.0), zero_div);
  CHECK(w.w_sta[0] == doctest::Approx(1.0 / 26));
  CHECK(w.w_sim[0] == doctest::Approx(1.0 / 26));
  CHECK(w.w_div[0] == 1.0);

  w = character_weights(table_with(0.0, 0.0), zero_div);
  CHECK(w.w_sta[5] == 1.0);

  w = character_weights(table_with(0.5, 0.5), zero_div);
  CHECK(w.w_sta[5] == doctest::Approx(0.5));
  CHECK(w.weight[5] == doctest::Approx(0.25));
}

TEST_CASE("trial and character scores") {
  CHECK(trial_score(1, 1, 1) == 1.0);
  CHECK(trial_score(0.3, 0.0, 0.9) == 0.0);
  CHECK(trial_score(0.5, 0.8, 0.25) == doctest::Approx(0.1));
  const std::vector<double> half{0.5, 0.5, 0.5};
  CHECK(character_score(0.0, half) == 0.0);
  CHECK(character_score(1.0, half) == 0.5);
  const std::vector<double> one_zero{1.0, 0.0};
  CHECK(character_score(0.5, one_zero) == 0.25);
}

TEST_CASE("competition ranks") {
  const std::vector<double> s{0.3, 0.5, 0.5, 0.1, 0.0, 0.0};
  CHECK(competition_ranks(s) == std::vector<int>{3, 1, 1, 4, 5, 5});
  const std::vector<double> single{0.2};
  auto r = normalize_and_rank(single);
  CHECK(r[0].norm_prompt == 100.0);
  CHECK(r[0].rank == 1);
  const std::vector<double> zeros{0.0, 0.0, 0.0};
  for (const auto& p : normalize_and_rank(zeros)) {
    CHECK(p.norm_prompt == 0.0);
    CHECK(p.rank == 1);
  }
  const std::vector<double> tie{0.2, 0.2, 0.1};
  r = normalize_and_rank(tie);
  CHECK(r[0].rank == 1);
  CHECK(r[1].rank == 1);
  CHECK(r[2].rank == 3);
}

TEST_CASE("score_table end to end on a small table") {
  // One character, two programs, T = 2. Program a: orthogonal vectors, b: repeated.
  EvaluationConfig cfg;
  cfg.trials = 2;
  cfg.alphabet = {'X', 'Y'};
  ScoreTable table(cfg, {"a", "b"});
  const ProbabilityVector x{{0.8, 0.2}}, y{{0.2, 0.8}};
  table.set_ok(0, 0, 0, 1.0, x);
  table.set_ok(1, 0, 0, 0.5, y);
  table.set_ok(0, 0, 1, 1.0, x);
  table.set_ok(1, 0, 1, 1.0, x);
  table.set_failed(0, 1, 0);
  table.set_failed(1, 1, 0);
  table.set_ok(0, 1, 1, 1.0, y);
  table.set_failed(1, 1, 1);

  const auto report = score_table(table);
  // Hand computation.
  const double cos_xy = 1.0 - (0.16 + 0.16) / (0.68);
  CHECK(report.div[0][0] == doctest::Approx(cos_xy));
  CHECK(report.div[0][1] == 0.0);
  CHECK(report.div[1][0] == 0.0);
  CHECK(report.div[1][1] == 0.0);

  const double mean_sta_x = (1.0 + 0.5 + 1.0 + 1.0) / 4;
  const double mean_sim_x = (0.8 + 0.2 + 0.8 + 0.8) / 4;
  const double mean_div_x = cos_xy / 2;
  const double w_x = std::max(1 - mean_sta_x, 0.5) * std::max(1 - mean_sim_x, 0.5) * std::max(1 - mean_div_x, 0.5);
  CHECK(report.weights.weight[0] == doctest::Approx(w_x));
  CHECK(report.trial(0, 0, 0) == doctest::Approx(w_x * 1.0 * 0.8));
  CHECK(report.trial(1, 0, 0) == doctest::Approx(w_x * 0.5 * 0.2));

  const double char_a_x = cos_xy * (w_x * 0.8 + w_x * 0.1) / 2;
  CHECK(report.char_scores[0][0] == doctest::Approx(char_a_x));
  CHECK(report.programs[0].prompt == doctest::Approx(char_a_x / 2));
  CHECK(report.programs[1].prompt == 0.0);
  CHECK(report.programs[0].norm_prompt == 100.0);
  CHECK(report.programs[0].rank == 1);
  CHECK(report.programs[1].rank == 2);
}

TEST_CASE("metric bounds hold on random tables") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 200; ++n) {
    EvaluationConfig cfg;
    cfg.trials = 2 + n % 4;
    ScoreTable table(cfg, {"a", "b", "c"});
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 26; ++j) {
        for (int i = 0; i < cfg.trials; ++i) {
          if (unit(rng) < 0.2) {
            table.set_failed(i, j, k);
          } else {
            table.set_ok(i, j, k, std::floor(unit(rng) * 5) / 4, random_softmax(rng));
          }
        }
      }
    }
    const auto report = score_table(table);
    double total = 0.0;
    for (int j = 0; j < 26; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      for (double f : {report.weights.w_sta[jj], report.weights.w_sim[jj], report.weights.w_div[jj]}) {
        CHECK(f >= 1.0 / 26);
        CHECK(f <= 1.0);
      }
      for (int k = 0; k < 3; ++k) {
        const double c = report.char_scores[jj][static_cast<std::size_t>(k)];
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        for (int i = 0; i < cfg.trials; ++i) {
          CHECK(report.trial(i, j, k) >= 0.0);
          CHECK(report.trial(i, j, k) <= 1.0);
        }
      }
    }
    for (const auto& p : report.programs) total += p.norm_prompt;
    CHECK(total == doctest::Approx(100.0));
  }
}
