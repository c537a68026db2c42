#include <benchmark/benchmark.h>

#include "grouplim/extremal.hpp"

namespace gl = grouplim;

namespace {

void BM_MinimizeAp3(benchmark::State& state) {
  const auto L = gl::builtin_config("ap3");
  gl::MinimizeOptions opts;
  opts.restarts = 4;
  for (auto _ : state) benchmark::DoNotOptimize(gl::minimize_density(L, state.range(0), 0.1, opts));
}
BENCHMARK(BM_MinimizeAp3)->Arg(31)->Arg(61)->Unit(benchmark::kMillisecond);

void BM_ProjectBoxMean(benchmark::State& state) {
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>((i * 7919) % 1000) / 400.0 - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(gl::project_box_mean(v, 0.3));
}
BENCHMARK(BM_ProjectBoxMean)->Arg(64)->Arg(4096);

}  // namespace
