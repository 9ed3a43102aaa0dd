#include <benchmark/benchmark.h>

#include "pjacobi/bands.hpp"
#include "pjacobi/floquet.hpp"
#include "pjacobi/models.hpp"
#include "pjacobi/random.hpp"

using namespace pjacobi;

static void BM_FiberEigensolve(benchmark::State& state) {
  const auto q = state.range(0);
  const auto op = PeriodicJacobiOperator::create(models::random_periodic(1, {q}, 1));
  const auto fiber = fiber_hamiltonian(op, {0.123}).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(hermitian_eigendecomposition(fiber));
}
BENCHMARK(BM_FiberEigensolve)->RangeMultiplier(2)->Range(2, 64);

static void BM_ComputeBands(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::ssh(1.0, 2.0));
  BandOptions opts;
  opts.threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(compute_bands(op, {state.range(0)}, opts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeBands)->Args({4096, 1})->Args({4096, 4})->UseRealTime()->Unit(benchmark::kMillisecond);

static void BM_ComputeBands2D(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::random_periodic(2, {2, 2}, 1));
  for (auto _ : state) benchmark::DoNotOptimize(compute_bands(op, {state.range(0), state.range(0)}));
}
BENCHMARK(BM_ComputeBands2D)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_FloquetRoundTrip(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::random_periodic(2, {2, 2}, 1));
  const auto g = Geometry::torus({state.range(0), state.range(0)}, op.period());
  const auto psi = random_state(3, g, state.range(0) - 1);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_floquet_transform(floquet_transform(psi)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_FloquetRoundTrip)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);
