#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "preciseum/unary.hpp"
#include "preciseum/xscalar.hpp"

using namespace preciseum;

namespace {

std::vector<XScalar> operands(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(0.5, 10.0);
  std::uniform_int_distribution<int> bits(8, 53);
  std::vector<XScalar> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(XScalar::with_bits(value(rng), bits(rng)));
  return out;
}

template <XScalar (*Op)(const XScalar&, const XScalar&)>
void BM_Binary(benchmark::State& state) {
  const auto xs = operands(1024);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Op(xs[i & 1023], xs[(i + 1) & 1023]));
    ++i;
  }
}

void BM_Unary(benchmark::State& state, UnaryFn f) {
  const auto xs = operands(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(apply_unary(f, xs[i++ & 1023]));
}

}  // namespace

BENCHMARK(BM_Binary<add>)->Name("BM_Add");
BENCHMARK(BM_Binary<mul>)->Name("BM_Mul");
BENCHMARK(BM_Binary<div>)->Name("BM_Div");
BENCHMARK_CAPTURE(BM_Unary, exp, UnaryFn::exp());
BENCHMARK_CAPTURE(BM_Unary, sin, UnaryFn::sin());
BENCHMARK_CAPTURE(BM_Unary, sigmoid, UnaryFn::sigmoid());
