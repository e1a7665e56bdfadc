#include "fextq/bandwidth.hpp"
#include "fextq/estimator.hpp"
#include "fextq/semimetrics.hpp"

#include "test_support.hpp"

#include <benchmark/benchmark.h>

using namespace fextq;

static void BM_ConditionalQuantile(benchmark::State& state)
{
  const auto data = fixtures::random_dataset(static_cast<std::size_t>(state.range(0)), 100, 3);
  EstimatorConfig cfg;
  cfg.h = 1.0;
  const auto x = data.curve(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(quantile(data, x, 0.05, cfg));
}
BENCHMARK(BM_ConditionalQuantile)->Arg(500)->Arg(2000);

static void BM_DistanceMatrix(benchmark::State& state)
{
  const auto data = fixtures::random_dataset(static_cast<std::size_t>(state.range(0)), 100, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(DistanceMatrix(data, SemiMetricKind::l2));
}
BENCHMARK(BM_DistanceMatrix)->Arg(200)->Arg(500);

static void BM_CvScore(benchmark::State& state)
{
  const auto data = fixtures::random_dataset(static_cast<std::size_t>(state.range(0)), 100, 5);
  const DistanceMatrix D(data, SemiMetricKind::l2);
  const double h = D.pair_quantile(0.1);
  EstimatorConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(cv_score(D, data.responses(), h, cfg));
}
BENCHMARK(BM_CvScore)->Arg(200)->Arg(500);
BENCHMARK_MAIN();
