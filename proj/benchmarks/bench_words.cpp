#include <benchmark/benchmark.h>

#include <random>

#include "isocirc/cover.hpp"
#include "isocirc/words.hpp"

using namespace isocirc;

static void BM_Multiply(benchmark::State& state) {
  const Group g(GroupSpec::parse("1,2,2,3"));
  std::mt19937_64 rng(1);
  std::vector<Word> words;
  for (int i = 0; i < 256; ++i) words.push_back(g.random_word(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(g.multiply(words[i % 256], words[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_Multiply)->Arg(8)->Arg(32)->Arg(128);

static void BM_SortToCoset(benchmark::State& state) {
  const Group g(GroupSpec::parse("1,2,2,3"));
  const SBasis basis(g);
  std::mt19937_64 rng(2);
  std::vector<Word> words;
  for (int i = 0; i < 64; ++i) words.push_back(g.random_word(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(basis.sort_to_coset(words[i++ % 64]));
}
BENCHMARK(BM_SortToCoset)->Arg(10)->Arg(20);

static void BM_SearchDegrees(benchmark::State& state) {
  const auto spec = GroupSpec::parse("0,3,2,2,2");
  for (auto _ : state) benchmark::DoNotOptimize(search_valid_d(spec, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_SearchDegrees)->Arg(10)->Arg(100);
