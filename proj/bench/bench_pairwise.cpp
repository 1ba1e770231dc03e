// Serial reference vs OpenMP tiled pair sweeps.
#include <benchmark/benchmark.h>

#include <vector>

#include "flock/initial.hpp"
#include "flock/pairwise.hpp"

namespace {

flock::Ensemble cloud(std::size_t n) {
  flock::InitialDensitySpec spec;
  spec.dim = 2;
  return flock::sample_initial(spec, n, 42);
}

template <flock::Backend B>
void BM_alignment(benchmark::State& state) {
  const flock::Ensemble e = cloud(static_cast<std::size_t>(state.range(0)));
  const flock::Kernel k{1.0, static_cast<double>(state.range(1)) / 100.0, {}};
  std::vector<double> out(e.x.size());
  for (auto _ : state) {
    flock::alignment(B, k, e.view(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <flock::Backend B>
void BM_pair_sums(benchmark::State& state) {
  const flock::Ensemble e = cloud(static_cast<std::size_t>(state.range(0)));
  const flock::Kernel k{1.0, static_cast<double>(state.range(1)) / 100.0, {}};
  for (auto _ : state) benchmark::DoNotOptimize(flock::pair_sums(B, k, e.view()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {256, 1000, 2000})
    for (int beta : {0, 20, 25, 50}) b->Args({n, beta});
}

}  // namespace

BENCHMARK(BM_alignment<flock::Backend::serial>)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_alignment<flock::Backend::parallel>)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pair_sums<flock::Backend::serial>)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pair_sums<flock::Backend::parallel>)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
