#include <benchmark/benchmark.h>

#include "zrescale/catalogue.hpp"
#include "zrescale/marty.hpp"
#include "zrescale/rescale.hpp"
#include "zrescale/sharp.hpp"

using namespace zrescale;

namespace {

ExprPtr member(const char* name, long j) {
  return instantiate(make_family(catalogue_entry(name)), j);
}

void BM_EvalJet(benchmark::State& state) {
  ExprPtr f = member("exp", 10);
  const CPoint z{Complex(0.05, -0.02)};
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet(f, z));
}
BENCHMARK(BM_EvalJet);

void BM_Sharp(benchmark::State& state) {
  ExprPtr f = member("planar", 10);
  const CPoint z{Complex(0.05, -0.02), Complex(0.1, 0.03)};
  for (auto _ : state) benchmark::DoNotOptimize(sharp(f, z).value);
}
BENCHMARK(BM_Sharp);

void BM_SupSharpOnBall(benchmark::State& state) {
  ExprPtr f = member("exp", 10);
  const OptimizerConfig cfg{static_cast<int>(state.range(0)), 4, 200, 1e-9, 1};
  const Ball ball{origin(1), 0.25};
  for (auto _ : state)
    benchmark::DoNotOptimize(sup_sharp_on_ball(f, ball, cfg).value);
}
BENCHMARK(BM_SupSharpOnBall)->Arg(16)->Arg(64);

void BM_SolveNormalization(benchmark::State& state) {
  ExprPtr f = member("exp", 10);
  const OptimizerConfig cfg{static_cast<int>(state.range(0)), 4, 200, 1e-9, 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        solve_normalization(f, 10, Alpha{0.0}, cfg, 1e-9).rho);
}
BENCHMARK(BM_SolveNormalization)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_RescaleStep(benchmark::State& state) {
  FamilySpec family = make_family(catalogue_entry("exp"));
  const OptimizerConfig cfg{16, 4, 200, 1e-9, 1};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        rescale_step(family, 10, Alpha{1.0}, cfg, 1e-9, 1e-3, 16).r);
}
BENCHMARK(BM_RescaleStep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
