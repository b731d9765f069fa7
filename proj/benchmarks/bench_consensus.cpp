#include <benchmark/benchmark.h>

#include "cbomm/consensus.hpp"
#include "cbomm/dynamics.hpp"
#include "cbomm/harness.hpp"
#include "cbomm/oracle.hpp"

namespace {

using namespace cbomm;

Ensemble make_ensemble(const Objective& obj, std::size_t n) {
  SolverConfig c = default_config();
  c.n_particles = n;
  c.seed = 1;
  return initialize(c, obj);
}

void BM_ComputeConsensus(benchmark::State& state) {
  const Objective obj = make_benchmark(BenchmarkId::Forsaken);
  const Ensemble e = make_ensemble(obj, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_consensus(obj, e.xs, e.ys, WeightParams{}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeConsensus)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_Advance(benchmark::State& state) {
  const Objective obj = make_benchmark(BenchmarkId::BilinearlyCoupled);
  SolverConfig c = default_config();
  c.n_particles = static_cast<std::size_t>(state.range(0));
  Ensemble e = initialize(c, obj);
  for (auto _ : state) {
    e = advance(e, c, obj).next;
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_Advance)->Arg(25)->Arg(100);

void BM_Oracle(benchmark::State& state) {
  const Objective obj = make_benchmark(BenchmarkId::SixthOrder);
  GridSpec spec;
  spec.points_per_dim = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_minmax(obj, spec));
}
BENCHMARK(BM_Oracle)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
