#include <benchmark/benchmark.h>

#include "pjacobi/dynamics.hpp"
#include "pjacobi/models.hpp"
#include "pjacobi/velocity.hpp"

using namespace pjacobi;

static void BM_BoxPlan(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::ssh(1.0, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(EvolutionPlan::box(op, {state.range(0)}));
}
BENCHMARK(BM_BoxPlan)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_BoxEvolve(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::ssh(1.0, 2.0));
  const auto plan = EvolutionPlan::box(op, {state.range(0)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  for (auto _ : state) benchmark::DoNotOptimize(plan.evolve(psi, 7.5));
}
BENCHMARK(BM_BoxEvolve)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_TorusEvolve(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::ssh(1.0, 2.0));
  const auto plan = EvolutionPlan::torus(op, {state.range(0)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  for (auto _ : state) benchmark::DoNotOptimize(plan.evolve(psi, 7.5));
}
BENCHMARK(BM_TorusEvolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

static void BM_IntegratedTrace(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::random_periodic(1, {3}, 1));
  const auto plan = EvolutionPlan::box(op, {recommended_box_radius(op, 0, 5.0)});
  const auto psi = LatticeState::delta(plan.geometry(), Site{0});
  for (auto _ : state) benchmark::DoNotOptimize(integrated_position_trace(op, plan, psi, 1, {5.0}, 0.05));
}
BENCHMARK(BM_IntegratedTrace)->Unit(benchmark::kMillisecond);

static void BM_ApplyQ(benchmark::State& state) {
  const auto op = PeriodicJacobiOperator::create(models::ssh(1.0, 2.0));
  const auto av = AsymptoticVelocity::build(op, {state.range(0)});
  const auto psi = LatticeState::delta(av.torus(), Site{0});
  for (auto _ : state) benchmark::DoNotOptimize(apply_Q(av, psi, 1));
}
BENCHMARK(BM_ApplyQ)->Arg(512)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
