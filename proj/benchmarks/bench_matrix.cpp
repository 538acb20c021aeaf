#include <benchmark/benchmark.h>

#include <random>

#include "obsfn/matrix.hpp"
#include "obsfn/sampling.hpp"
#include "obsfn/vn.hpp"

using namespace obsfn;

static void BM_Jacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n);
  auto a = random_hermitian(n, rng);
  Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(eigen_hermitian(a, tol));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Jacobi)->RangeMultiplier(2)->Range(2, 32)->Complexity();

static void BM_SpectralMeet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n + 100);
  auto a = random_hermitian(n, rng), b = random_hermitian(n, rng);
  Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_meet({a, b}, tol));
}
BENCHMARK(BM_SpectralMeet)->Arg(2)->Arg(4)->Arg(8);

static void BM_CoreOfProjection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(n + 200);
  Tolerances tol;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<double>(i % 3);
  auto m = VNSubalgebra::generated_by(n, {CMatrix::diagonal(d)}, tol);
  auto q = random_projection(n, n / 2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(core(m, q));
}
BENCHMARK(BM_CoreOfProjection)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
