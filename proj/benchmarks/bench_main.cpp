#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "pcgeval/classify.hpp"
#include "pcgeval/extraction.hpp"
#include "pcgeval/fixtures.hpp"
#include "pcgeval/levelgen.hpp"
#include "pcgeval/metrics.hpp"
#include "pcgeval/raster.hpp"
#include "pcgeval/xml_codec.hpp"

using namespace pcgeval;

namespace {

std::vector<ProbabilityVector> random_vectors(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::vector<ProbabilityVector> out;
  for (int t = 0; t < n; ++t) {
    Logits z{std::vector<double>(26)};
    for (auto& x : z.z) x = u(rng);
    out.push_back(softmax(z));
  }
  return out;
}

std::vector<DropCall> random_calls(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> type(0, 2), x(1, 18);
  std::vector<DropCall> calls(static_cast<std::size_t>(n));
  for (auto& c : calls) c = {kAllBlockTypes[type(rng)], x(rng)};
  return calls;
}

Level character_level(char c) {
  return settle(load_character_program(default_fixtures_dir() / "characters", c), {}).level;
}

}  // namespace

static void BM_diversity(benchmark::State& state) {
  const int trials = static_cast<int>(state.range(0));
  const auto vs = random_vectors(trials, 7);
  for (auto _ : state) benchmark::DoNotOptimize(diversity(vs, trials));
  state.SetComplexityN(trials);
}
BENCHMARK(BM_diversity)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNSquared);

static void BM_softmax(benchmark::State& state) {
  Logits z{std::vector<double>(26)};
  for (std::size_t i = 0; i < 26; ++i) z.z[i] = static_cast<double>(i % 7) - 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(softmax(z));
}
BENCHMARK(BM_softmax);

static void BM_settle(benchmark::State& state) {
  const auto calls = random_calls(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) benchmark::DoNotOptimize(settle(calls, {}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_settle)->Arg(10)->Arg(40)->Arg(120);

static void BM_stability(benchmark::State& state) {
  const auto level = settle(random_calls(static_cast<int>(state.range(0)), 13), {}).level;
  for (auto _ : state) benchmark::DoNotOptimize(assess_stability(level));
}
BENCHMARK(BM_stability)->Arg(10)->Arg(40)->Arg(120);

static void BM_extract(benchmark::State& state) {
  const auto calls = load_character_program(default_fixtures_dir() / "characters", 'W');
  const std::string response = "Here you go.\n\n```python\n" + format_program(calls) + "```\n";
  for (auto _ : state) benchmark::DoNotOptimize(extract_program(response));
}
BENCHMARK(BM_extract);

static void BM_xml_round_trip(benchmark::State& state) {
  const auto level = character_level('B');
  for (auto _ : state) benchmark::DoNotOptimize(xml_to_level(level_to_xml(level)));
}
BENCHMARK(BM_xml_round_trip);

static void BM_rasterize(benchmark::State& state) {
  const auto level = character_level('H');
  for (auto _ : state) benchmark::DoNotOptimize(rasterize(level));
}
BENCHMARK(BM_rasterize);

static void BM_template_classify(benchmark::State& state) {
  const auto dir = default_fixtures_dir() / "characters";
  const auto templates = build_template_set(dir, EvaluationConfig::default_alphabet());
  const auto image = rasterize(character_level('R'));
  for (auto _ : state) benchmark::DoNotOptimize(template_classify(image, templates));
}
BENCHMARK(BM_template_classify);

BENCHMARK_MAIN();
