#include <benchmark/benchmark.h>

#include "mvlab/evolution.hpp"
#include "mvlab/frequency.hpp"
#include "mvlab/madelung.hpp"
#include "mvlab/universes.hpp"

namespace {

using namespace mvlab;

void BM_SplitStep(benchmark::State& state) {
  const SpatialGrid g(-10.0, 10.0, static_cast<std::size_t>(state.range(0)), Boundary::periodic);
  const PhysicalParams p{};
  const auto wf = make_gaussian_packet(g, 0.0, 1.0, 1.0, p);
  const auto v = make_harmonic_potential(g, 1.0, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_schrodinger(wf, v, p, 1e-3, 100, 100));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_SplitStep)->Arg(512)->Arg(2048)->Arg(8192);

void BM_CrankNicolson(benchmark::State& state) {
  const SpatialGrid g(-10.0, 10.0, static_cast<std::size_t>(state.range(0)), Boundary::dirichlet);
  const PhysicalParams p{};
  const auto wf = make_gaussian_packet(g, 0.0, 1.0, 1.0, p);
  const auto v = make_free_potential(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_schrodinger(wf, v, p, 1e-3, 100, 100));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_CrankNicolson)->Arg(512)->Arg(2048)->Arg(8192);

void BM_QuantumPotential(benchmark::State& state) {
  const SpatialGrid g(-10.0, 10.0, 4096, Boundary::periodic);
  const PhysicalParams p{};
  const auto wf = make_gaussian_packet(g, 0.0, 1.0, 2.0, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(quantum_potential(decompose(wf, p), p));
  }
}
BENCHMARK(BM_QuantumPotential);

void BM_BohmianEnsemble(benchmark::State& state) {
  const SpatialGrid g(-10.0, 10.0, 1024, Boundary::periodic);
  const PhysicalParams p{};
  const auto wf = make_gaussian_packet(g, 0.0, 1.0, 0.0, p);
  const auto rec = evolve_schrodinger(wf, make_free_potential(g), p, 1e-3, 1000, 10);
  const auto x0 = stratified_positions(wf, static_cast<std::size_t>(state.range(0)), p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate_universes(rec, x0, p));
  }
}
BENCHMARK(BM_BohmianEnsemble)->Arg(100)->Arg(1000);

void BM_CentralMoment(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(central_moment(m, 1000, 0.3));
  }
}
BENCHMARK(BM_CentralMoment)->Arg(2)->Arg(4)->Arg(8);

void BM_BranchEnumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_branch_tree(n, 0.25));
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_BranchEnumeration)->Arg(12)->Arg(16)->Arg(20);

}  // namespace
BENCHMARK_MAIN();
