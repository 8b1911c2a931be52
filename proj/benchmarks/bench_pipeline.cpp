#include <benchmark/benchmark.h>

#include "sqf/graph.hpp"
#include "sqf/lambda.hpp"
#include "sqf/weights.hpp"

namespace {

using namespace sqf;

void BM_BuildLambda(benchmark::State& state) {
  const PeriodBound p(static_cast<int>(state.range(0)));
  const auto threads = static_cast<unsigned>(state.range(1));
  std::size_t size = 0;
  for (auto _ : state) {
    const LambdaSet lambda = build_lambda(p, 4, threads);
    size = lambda.size();
    benchmark::DoNotOptimize(size);
  }
  state.counters["nodes"] = static_cast<double>(size);
}
BENCHMARK(BM_BuildLambda)->ArgsProduct({{6, 8, 10}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_BuildGraph(benchmark::State& state) {
  const LambdaSet lambda = build_lambda(PeriodBound(static_cast<int>(state.range(0))), 4);
  for (auto _ : state) {
    TransitionGraph g = build_graph(lambda, static_cast<unsigned>(state.range(1)));
    benchmark::DoNotOptimize(g.arc_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lambda.size()));
}
BENCHMARK(BM_BuildGraph)->ArgsProduct({{8, 10}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_Iterate(benchmark::State& state) {
  const TransitionGraph g = build_graph(build_lambda(PeriodBound(static_cast<int>(state.range(0))), 4));
  const WeightVector c(g.vertex_count(), mpz_class(100000));
  for (auto _ : state) {
    WeightVector next = iterate(g, c, 3, static_cast<unsigned>(state.range(1)));
    benchmark::DoNotOptimize(next.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.vertex_count()));
}
BENCHMARK(BM_Iterate)->ArgsProduct({{8, 10}, {1, 4}})->Unit(benchmark::kMillisecond);

// Whole pipeline stage that the certify command runs after the graph.
void BM_FixedPoint(benchmark::State& state) {
  const TransitionGraph g = build_graph(build_lambda(PeriodBound(static_cast<int>(state.range(0))), 4));
  for (auto _ : state) {
    Certificate cert = run_fixed_point(g);
    benchmark::DoNotOptimize(cert.alpha);
  }
}
BENCHMARK(BM_FixedPoint)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
