#include <benchmark/benchmark.h>

#include <random>

#include "obsfn/corpus.hpp"
#include "obsfn/observable.hpp"
#include "obsfn/presheaf.hpp"
#include "obsfn/sampling.hpp"
#include "obsfn/stone.hpp"

using namespace obsfn;

static void BM_DualIdealsBoolean(benchmark::State& state) {
  auto l = corpus::boolean(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto ideals = enumerate_dual_ideals(*l);
    benchmark::DoNotOptimize(ideals);
  }
  state.counters["elements"] = static_cast<double>(l->size());
}
BENCHMARK(BM_DualIdealsBoolean)->DenseRange(2, 5);

static void BM_DualIdealsMO(benchmark::State& state) {
  auto l = corpus::mo(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto ideals = enumerate_dual_ideals(*l);
    benchmark::DoNotOptimize(ideals);
  }
}
BENCHMARK(BM_DualIdealsMO)->Arg(2)->Arg(8)->Arg(20);

static void BM_Reconstruct(benchmark::State& state) {
  auto l = corpus::boolean(static_cast<std::size_t>(state.range(0)));
  auto space = std::make_shared<const StoneSpectrum>(l);
  std::mt19937_64 rng(1);
  auto f = observable_from_spectral(random_family(l, rng), space);
  for (auto _ : state) {
    auto e = reconstruct(f);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_Reconstruct)->DenseRange(2, 4);

static void BM_IntersectionCondition(benchmark::State& state) {
  auto l = corpus::boolean(static_cast<std::size_t>(state.range(0)));
  auto space = std::make_shared<const StoneSpectrum>(l);
  std::mt19937_64 rng(2);
  auto f = observable_from_spectral(random_family(l, rng), space);
  for (auto _ : state) benchmark::DoNotOptimize(check_intersection_condition(f));
}
BENCHMARK(BM_IntersectionCondition)->DenseRange(2, 4);

static void BM_SheafConditionMO(benchmark::State& state) {
  auto l = corpus::mo(static_cast<std::size_t>(state.range(0)));
  auto s = spectral_presheaf(l, {1.0, 2.0});
  for (auto _ : state) benchmark::DoNotOptimize(check_sheaf_condition(s));
}
BENCHMARK(BM_SheafConditionMO)->Arg(2)->Arg(3);
