#include <random>

#include <benchmark/benchmark.h>

#include "preciseum/matmul.hpp"
#include "preciseum/reduce.hpp"

using namespace preciseum;

namespace {

XArray random_square(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-4.0, 4.0);
  std::uniform_int_distribution<int> bits(8, 53);
  std::vector<double> v(n * n);
  std::vector<std::uint8_t> b(n * n);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = value(rng);
    b[i] = static_cast<std::uint8_t>(bits(rng));
  }
  return XArray(Shape{n, n}, v, b);
}

void run_estimator(benchmark::State& state, Estimator est) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const XArray a = random_square(n, 1), b = random_square(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(a, b, est));
  state.SetComplexityN(state.range(0));
}

void BM_EstimateV1(benchmark::State& s) { run_estimator(s, Estimator::v1()); }
void BM_EstimateV2(benchmark::State& s) { run_estimator(s, Estimator::v2()); }
void BM_EstimateHolder8(benchmark::State& s) { run_estimator(s, Estimator::holder(8)); }
void BM_EstimateHolderAuto(benchmark::State& s) { run_estimator(s, Estimator::holder_auto()); }

void BM_MatmulValues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const XArray a = random_square(n, 1), b = random_square(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul_values(a, b));
}

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const XArray a = random_square(n, 1), b = random_square(n, 2);
  const Parallelism par{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b, Estimator::v2(), par));
}

void BM_SumReduce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const XArray a = random_square(n, 3);
  const Parallelism par{static_cast<unsigned>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(sum_reduce(a, std::nullopt, par));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

}  // namespace

BENCHMARK(BM_EstimateV1)->RangeMultiplier(4)->Range(16, 256)->Complexity();
BENCHMARK(BM_EstimateV2)->RangeMultiplier(4)->Range(16, 256)->Complexity();
BENCHMARK(BM_EstimateHolder8)->RangeMultiplier(4)->Range(16, 256)->Complexity();
BENCHMARK(BM_EstimateHolderAuto)->RangeMultiplier(4)->Range(16, 256)->Complexity();
BENCHMARK(BM_MatmulValues)->RangeMultiplier(4)->Range(16, 256);
BENCHMARK(BM_Matmul)->ArgsProduct({{64, 256}, {1, 4}});
BENCHMARK(BM_SumReduce)->ArgsProduct({{64, 1024}, {1, 4}});
