#include <benchmark/benchmark.h>

#include "trackscore/random.hpp"
#include "trackscore/tensor.hpp"

using namespace trackscore;

namespace {

TruncatedTensor random_unital(Rng& rng, std::size_t width, std::size_t depth) {
  TruncatedTensor t(width, depth);
  for (double& c : t.coefficients()) c = rng.uniform(-0.5, 0.5);
  t.scalar() = 1.0;
  return t;
}

void BM_Mul(benchmark::State& state) {
  Rng rng(1);
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto a = random_unital(rng, d, m);
  const auto b = random_unital(rng, d, m);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
}

void BM_Inverse(benchmark::State& state) {
  Rng rng(2);
  const auto a = random_unital(rng, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(inverse(a));
}

void BM_MulExp(benchmark::State& state) {
  Rng rng(3);
  const auto d = static_cast<std::size_t>(state.range(0));
  auto a = random_unital(rng, d, static_cast<std::size_t>(state.range(1)));
  const std::vector<double> v(d, 1e-3);
  for (auto _ : state) {
    mul_exp_inplace(a, v);
    benchmark::ClobberMemory();
  }
}

}  // namespace

BENCHMARK(BM_Mul)->ArgsProduct({{2, 3, 4}, {3, 4, 5}});
BENCHMARK(BM_Inverse)->ArgsProduct({{2, 4}, {4, 5}});
BENCHMARK(BM_MulExp)->ArgsProduct({{2, 4}, {4, 5}});
BENCHMARK_MAIN();
