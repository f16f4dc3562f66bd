#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "fibflow/flux_mc.hpp"
#include "fibflow/invariants.hpp"
#include "fibflow/quadrature.hpp"
#include "fibflow/rng.hpp"

using namespace fibflow;

static void BM_IntegrateAbsSine(benchmark::State& state) {
  const double bp[] = {0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate([](double t) { return std::abs(std::sin(2 * std::numbers::pi * t)); }, 0, 1, bp));
  }
}
BENCHMARK(BM_IntegrateAbsSine);

static void BM_HelicityPolynomial(benchmark::State& state) {
  const Profile p{ScalarFn::polynomial({0.3, -1, 2, 0.5}), ScalarFn::polynomial({2, 0.1, -0.4})};
  for (auto _ : state) benchmark::DoNotOptimize(helicity_block_c(p, {1, 1}));
}
BENCHMARK(BM_HelicityPolynomial)->Unit(benchmark::kMillisecond);

static void BM_Trunkenness(benchmark::State& state) {
  const Profile p{ScalarFn::sinusoid(1, 6, 0.2, 0), ScalarFn::piecewise_linear({0, 0.5, 1}, {1, -1, 0.5})};
  for (auto _ : state) benchmark::DoNotOptimize(trunkenness_block_c(p));
}
BENCHMARK(BM_Trunkenness)->Unit(benchmark::kMillisecond);

static void BM_FluxEstimate(benchmark::State& state) {
  const Profile p{ScalarFn::sinusoid(1, 2, 0, 0), ScalarFn::constant(1)};
  FluxOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  opts.method = state.range(2) ? CrossingMethod::rk4 : CrossingMethod::analytic;
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(flux_estimate(p, MeasureSpec::volume(), {0.0}, 1e-3, n, 24301, opts));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_FluxEstimate)
    ->ArgsProduct({{1 << 20}, {1, 4}, {0, 1}})
    ->ArgNames({"n", "threads", "rk4"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

static void BM_Philox(benchmark::State& state) {
  const RngStream rng(24301, 0);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rng.bits(i++));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Philox);
BENCHMARK_MAIN();
