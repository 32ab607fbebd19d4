#include <benchmark/benchmark.h>

#include <vector>

#include "tagclust/cocluster.hpp"
#include "tagclust/divergence.hpp"
#include "tagclust/log.hpp"
#include "tagclust/smoothing.hpp"
#include "tagclust/synthgen.hpp"

using namespace tagclust;

namespace {

SparseBinaryMatrix checkerboard(std::size_t n, std::size_t k) {
  log::set_level(log::Level::Error);
  CheckerboardSpec spec;
  spec.n_x = spec.n_y = n;
  spec.k_x = spec.k_y = k;
  spec.seed = 7;
  return drop_empty(generate_checkerboard(spec).matrix).matrix;
}

void BM_Smooth(benchmark::State& state) {
  const auto m = checkerboard(static_cast<std::size_t>(state.range(0)), 15);
  for (auto _ : state) benchmark::DoNotOptimize(smooth(m).smoothed.sum());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Smooth)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Sinkhorn(benchmark::State& state) {
  const auto m = checkerboard(static_cast<std::size_t>(state.range(0)), 15);
  const auto s = document_similarity(m);
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_knopp(s).iterations);
}
BENCHMARK(BM_Sinkhorn)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

// Engine construction: distributions plus the two initial directed KL matrices.
void BM_InitialKL(benchmark::State& state) {
  const auto m_star = smooth(checkerboard(static_cast<std::size_t>(state.range(0)), 15)).smoothed;
  for (auto _ : state) {
    CoclusterEngine e(m_star);
    benchmark::DoNotOptimize(e.k(Axis::Row));
  }
}
BENCHMARK(BM_InitialKL)->Arg(100)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_IncrementalUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DenseRealMatrix dist(n, n, 1.0 / static_cast<double>(n));
  const std::vector<char> live(n, 1);
  DirectedKLMatrix kl(n);
  for (auto _ : state) {
    incremental_kl_update(kl, dist, live, 0, 1);
    benchmark::ClobberMemory();
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IncrementalUpdate)->RangeMultiplier(2)->Range(128, 1024)->Complexity(benchmark::oNSquared);

void BM_Agglomerate(benchmark::State& state) {
  const auto m_star = smooth(checkerboard(static_cast<std::size_t>(state.range(0)), 15)).smoothed;
  EngineConfig cfg;
  cfg.cost_mode = state.range(1) == 0 ? CostMode::Composite : CostMode::KlOnly;
  for (auto _ : state) benchmark::DoNotOptimize(agglomerate(m_star, cfg).total_merges());
}
BENCHMARK(BM_Agglomerate)
    ->Args({100, 0})
    ->Args({300, 0})
    ->Args({300, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
