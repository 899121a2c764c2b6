#include <benchmark/benchmark.h>

#include "qmpol/bqf.hpp"
#include "qmpol/class_group.hpp"
#include "qmpol/polar_counts.hpp"
#include "qmpol/quat_alg.hpp"

using namespace qmpol;

static void BM_ClassNumberImag(benchmark::State& state) {
  const Int d(-4 * state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(class_number_imag(d));
}
BENCHMARK(BM_ClassNumberImag)->Arg(6)->Arg(30030)->Arg(9699690)->Unit(benchmark::kMillisecond);

static void BM_ClassNumberImagThreads(benchmark::State& state) {
  const Int d(-38798760);
  for (auto _ : state) benchmark::DoNotOptimize(class_number_imag(d, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_ClassNumberImagThreads)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_AnalyticH(benchmark::State& state) {
  const Int d(-state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(analytic_h(d));
}
BENCHMARK(BM_AnalyticH)->Arg(3299)->Arg(99991)->Unit(benchmark::kMillisecond);

static void BM_PellUnit(benchmark::State& state) {
  const Int d(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pell_unit(d));
}
BENCHMARK(BM_PellUnit)->Arg(24)->Arg(38798760)->Arg(1000004);

static void BM_RealClassNumber(benchmark::State& state) {
  const Int d(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(class_number_real(d));
}
BENCHMARK(BM_RealClassNumber)->Arg(260)->Arg(38798760)->Unit(benchmark::kMicrosecond);

static void BM_QuarticClassGroup(benchmark::State& state) {
  for (auto _ : state) {
    const MaximalOrder O(NumberField::relative_quadratic(Int(5), Rat(-19), Rat(0)));
    const UnitGroup U = compute_units(O);
    benchmark::DoNotOptimize(class_group(O, U).h);
  }
}
BENCHMARK(BM_QuarticClassGroup)->Unit(benchmark::kMillisecond);

static void BM_PiZeroSurface(benchmark::State& state) {
  const auto ctx = make_context(BaseField::rational(), {Rat(state.range(0)), 0});
  for (auto _ : state) {
    clear_extension_memo();
    benchmark::DoNotOptimize(pi_zero(ctx));
  }
}
BENCHMARK(BM_PiZeroSurface)->Arg(6)->Arg(9699690)->Unit(benchmark::kMillisecond);

static void BM_FourfoldProfile(benchmark::State& state) {
  const auto ctx = make_context(BaseField::real_quadratic(Int(2)), {7, 0});
  for (auto _ : state) {
    clear_extension_memo();
    benchmark::DoNotOptimize(pi_profile(ctx));
  }
}
BENCHMARK(BM_FourfoldProfile)->Unit(benchmark::kMillisecond);

static void BM_HilbertSymbol(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(discriminant_of(Rat(-1019), Rat(2 * 3 * 5 * 7 * 11)));
}
BENCHMARK(BM_HilbertSymbol);
BENCHMARK_MAIN();
