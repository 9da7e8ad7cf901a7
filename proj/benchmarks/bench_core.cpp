#include <benchmark/benchmark.h>

#include "rovella/bound_period.hpp"
#include "rovella/density.hpp"
#include "rovella/lineage.hpp"
#include "rovella/orbit.hpp"
#include "rovella/parameter_lab.hpp"
#include "rovella/statistics.hpp"

using namespace rovella;

namespace {

const MapParams kParams(0.14);
const AnalysisConstants kConsts = AnalysisConstants::defaults(1.5);

void BM_Iterate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(iterate(kParams, 0.3, n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Iterate)->Arg(1000)->Arg(100000);

void BM_StabilizationTimes(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stabilization_times(kParams, 0.3, kConsts, n_max));
}
BENCHMARK(BM_StabilizationTimes)->Arg(500)->Arg(5000);

void BM_TailCurve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(tail_curve(kParams, kConsts, 10000, 500, 1));
}
BENCHMARK(BM_TailCurve)->Unit(benchmark::kMillisecond);

void BM_BoundPeriod(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bound_period(kParams, kConsts, m));
}
BENCHMARK(BM_BoundPeriod)->Arg(5)->Arg(25)->Arg(200);

void BM_Certify(benchmark::State& state) {
  const CertifyOptions opt;
  for (auto _ : state) benchmark::DoNotOptimize(certify(kParams, kConsts, opt));
}
BENCHMARK(BM_Certify);

void BM_Lineages(benchmark::State& state) {
  const PartitionContext ctx(kParams, kConsts, 60);
  LineageOptions o;
  o.samples = 1000;
  o.horizon = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_lineages(ctx, o));
}
BENCHMARK(BM_Lineages)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_UlamDensity(benchmark::State& state) {
  UlamOptions o;
  o.bins = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ulam_density(kParams, o));
}
BENCHMARK(BM_UlamDensity)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_HistogramDensity(benchmark::State& state) {
  HistogramOptions o;
  o.sample_size = 100;
  for (auto _ : state) benchmark::DoNotOptimize(histogram_density(kParams, o));
}
BENCHMARK(BM_HistogramDensity)->Unit(benchmark::kMillisecond);

void BM_CltReport(benchmark::State& state) {
  CltOptions o;
  o.sample_size = 1000;
  const Observable id = make_observable("identity", kParams);
  for (auto _ : state) benchmark::DoNotOptimize(clt_report(kParams, id, 2000, o));
}
BENCHMARK(BM_CltReport)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
