#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "isocirc/circular.hpp"
#include "isocirc/cover.hpp"
#include "isocirc/leftorder.hpp"
#include "isocirc/realization.hpp"

using namespace isocirc;

namespace {

OrderHandle handle(long d) {
  static const auto config =
      std::make_shared<const Configuration>(Configuration::build(GroupSpec::parse("0,2,2,3")));
  for (const auto& c : search_valid_d(config->spec(), 8))
    if (c.d == d) return OrderHandle(config, c);
  throw std::runtime_error("bad degree");
}

}  // namespace

static void BM_BuildConfiguration(benchmark::State& state) {
  const auto spec = GroupSpec::parse("1,1,2");
  for (auto _ : state) benchmark::DoNotOptimize(Configuration::build(spec));
}
BENCHMARK(BM_BuildConfiguration)->Unit(benchmark::kMillisecond);

static void BM_EvalC(benchmark::State& state) {
  const OrderHandle h = handle(state.range(0));
  PointEvaluator ev = h.evaluator();
  std::mt19937_64 rng(3);
  const Group& g = h.group();
  std::vector<Word> words;
  for (int i = 0; i < 300; ++i) words.push_back(g.random_word(rng, 12));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_c(h, ev, words[i % 300], words[(i + 1) % 300], words[(i + 2) % 300]));
    i += 3;
  }
}
BENCHMARK(BM_EvalC)->Arg(1)->Arg(7)->Arg(13);

static void BM_HatCompare(benchmark::State& state) {
  const LeftOrderHandle h(handle(state.range(0)));
  const auto words = random_hat_words(h.group(), 256, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hat_compare(h, words[i % 256], words[(i + 1) % 256]));
    ++i;
  }
}
BENCHMARK(BM_HatCompare)->Arg(1)->Arg(7);

static void BM_Roundtrip(benchmark::State& state) {
  const OrderHandle h = handle(1);
  for (auto _ : state) benchmark::DoNotOptimize(roundtrip(h, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_Roundtrip)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
