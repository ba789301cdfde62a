#include <benchmark/benchmark.h>

#include <vector>

#include "lnorm/generators.hpp"
#include "lnorm/normest.hpp"

namespace {

const lnorm::StructuredMatrix& a1() {
  static const lnorm::StructuredMatrix A{lnorm::Shape::L, lnorm::GeneratorSequence::as(1.0)};
  return A;
}

void BM_StructuredMatvec(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const lnorm::TruncatedOperator op{a1(), M};
  std::vector<double> x(M, 1.0), y(M);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_StructuredMatvec)->RangeMultiplier(2)->Range(1 << 10, 1 << 20)->Complexity(benchmark::oN);

void BM_StructuredMatvecShape(benchmark::State& state) {
  const auto shape = static_cast<lnorm::Shape>(state.range(1));
  const auto M = static_cast<std::size_t>(state.range(0));
  const lnorm::TruncatedOperator op{lnorm::StructuredMatrix{shape, lnorm::GeneratorSequence::as(1.0)}, M};
  std::vector<double> x(M, 1.0), y(M);
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_StructuredMatvecShape)->ArgsProduct({{1 << 14}, {0, 1, 2}});

void BM_DenseMatvec(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const auto D = lnorm::materialize_dense(a1(), M);
  std::vector<double> x(M, 1.0);
  for (auto _ : state) {
    auto y = lnorm::dense_matvec(D, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseMatvec)->RangeMultiplier(2)->Range(1 << 8, 1 << 12)->Complexity(benchmark::oNSquared);

void BM_Norm2Power(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto est = lnorm::norm2_power(a1(), M);
    benchmark::DoNotOptimize(est.value);
  }
}
BENCHMARK(BM_Norm2Power)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
