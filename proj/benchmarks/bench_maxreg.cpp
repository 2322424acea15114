#include <benchmark/benchmark.h>

#include "maxregkit/maxreg.hpp"
#include "maxregkit/numlin.hpp"
#include "maxregkit/random.hpp"
#include "maxregkit/signal.hpp"

using namespace maxregkit;

namespace {

Generator bench_generator(std::size_t n) {
  Rng rng(5);
  CMatrix a = CMatrix::identity(n) * 2.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) += 0.2 * rng.complex_normal();
  return make_generator(a);
}

Signal bench_signal(const Generator& g, std::size_t samples) {
  return preset_signal("randsmooth", Grid(20.0 / g.alpha(), samples), g.dim(), {}, 1);
}

void BM_Direct(benchmark::State& state) {
  const Generator g = bench_generator(static_cast<std::size_t>(state.range(1)));
  const Signal f = bench_signal(g, static_cast<std::size_t>(state.range(0)));
  const KernelCache cache(g, f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(mreg_direct(cache, f, Sign::plus));
}

void BM_RectFft(benchmark::State& state) {
  const Generator g = bench_generator(static_cast<std::size_t>(state.range(1)));
  const Signal f = bench_signal(g, static_cast<std::size_t>(state.range(0)));
  const KernelCache cache(g, f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(mreg_rect_fft(cache, f, Sign::plus));
}

void BM_Fourier(benchmark::State& state) {
  const Generator g = bench_generator(static_cast<std::size_t>(state.range(1)));
  const Signal f = bench_signal(g, static_cast<std::size_t>(state.range(0)));
  const FrequencyGrid freqs(f.grid());
  for (auto _ : state) benchmark::DoNotOptimize(mreg_fourier(g, f, Sign::plus, freqs));
}

void BM_KernelCache(benchmark::State& state) {
  const Generator g = bench_generator(static_cast<std::size_t>(state.range(1)));
  const Grid grid(20.0 / g.alpha(), static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(KernelCache(g, grid));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {512, 2048, 8192})
    for (long dim : {1, 4}) b->Args({n, dim});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_Direct)->Apply(sizes);
BENCHMARK(BM_RectFft)->Apply(sizes);
BENCHMARK(BM_Fourier)->Apply(sizes);
BENCHMARK(BM_KernelCache)->Apply(sizes);
BENCHMARK_MAIN();
