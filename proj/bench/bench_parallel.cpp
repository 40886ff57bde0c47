// Serial reference vs OpenMP kernels. Arg 0 runs serially, arg 1 in parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "chariot/curvature.hpp"
#include "chariot/geodesics.hpp"
#include "chariot/projection.hpp"
#include "test_support.hpp"

using namespace chariot;
using namespace chariot::testing;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_curvature_field(benchmark::State& state) {
  const Surface s = torus(2.0, 1.0);
  const auto pts = random_points(64, 0.0, kTwoPi, 0.0, kTwoPi, 11);
  const std::vector<double> scales{0.08, 0.04, 0.02};
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_field(s, pts, scales, {}, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_egregium_check(benchmark::State& state) {
  const Surface s = ellipsoid(1.0, 1.0, 0.5);
  const auto pts = random_points(64, 0.3, kPi - 0.3, 0.0, kTwoPi, 12);
  for (auto _ : state) benchmark::DoNotOptimize(egregium_check(s, pts, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pts.size()));
}

void BM_gauss_bonnet(benchmark::State& state) {
  const Surface s = hill();
  const RegionBoundary r(generators::chart_rectangle(-0.5, 1.0, -0.25, 0.75, 0.005));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_bonnet_check(s, r, 8, {}, mode(state)));
}

void BM_distortion_report(benchmark::State& state) {
  const Surface s = sphere();
  const FlatMap m = builtin_projection("mercator", s);
  for (auto _ : state) benchmark::DoNotOptimize(distortion_report(m, s, 200, 7, mode(state)));
  state.SetItemsProcessed(state.iterations() * 200);
}

}  // namespace

BENCHMARK(BM_curvature_field)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_egregium_check)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_gauss_bonnet)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_distortion_report)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
