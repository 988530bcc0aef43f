#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fconv/bases.hpp"
#include "fconv/convolution.hpp"
#include "fconv/grid_function.hpp"
#include "fconv/metrics.hpp"
#include "fconv/partition.hpp"

using namespace fconv;

namespace {

constexpr double kPi = 3.14159265358979323846;

ConvolutionConfig example_config(int samples_per_cell) {
  const Partition part = Partition::uniform(0.0, 3.0, 6);
  return ConvolutionConfig(
      part,
      ScaleVector::from_functions(part, samples_per_cell, {[](double x) { return x / 8.0; }}),
      GridFunction::sample(part, samples_per_cell,
                           [](double x) { return std::sin(3.0 * kPi * x); }),
      GridFunction::sample(part, samples_per_cell, [](double x) { return std::exp(x); }));
}

void bm_operator_sweep(benchmark::State& state) {
  const ConvolutionConfig cfg = example_config(static_cast<int>(state.range(0)));
  GridFunction g = cfg.seed;
  for (auto _ : state) {
    g = apply_rb_operator(cfg, g);
    benchmark::DoNotOptimize(g);
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(bm_operator_sweep)->Arg(128)->Arg(512)->Arg(2048);

void bm_fixed_point(benchmark::State& state) {
  const ConvolutionConfig cfg = example_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    FixedPointResult r = fixed_point(cfg);
    benchmark::DoNotOptimize(r.attractor);
  }
}
BENCHMARK(bm_fixed_point)->Arg(128)->Arg(512)->Arg(2048);

void bm_grid_pushforward(benchmark::State& state) {
  const ConvolutionConfig cfg = example_config(512);
  std::vector<std::size_t> idx;
  std::vector<double> vals = node_values(cfg);
  for (std::size_t n = 0; n <= 6; ++n) idx.push_back(n * 512);
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto out = pushforward_on_grid(cfg, depth, idx, vals);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(bm_grid_pushforward)->Arg(4)->Arg(12);

void bm_lp_norm(benchmark::State& state) {
  const Partition part = Partition::uniform(0.0, 1.0, 4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(4 * static_cast<std::size_t>(state.range(0)) + 1);
  for (double& v : values) v = dist(rng);
  const GridFunction g(part, static_cast<int>(state.range(0)), std::move(values));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_norm(g, 2.0));
  }
}
BENCHMARK(bm_lp_norm)->Arg(1024)->Arg(16384);

void bm_gram_eigenvalues(benchmark::State& state) {
  // convolved members are far from orthogonal, so the solver does real work
  const Partition part = Partition::uniform(0.0, 1.0, 2);
  const FunctionFamily fam = convolve_family(trig_basis(part, 256, static_cast<int>(state.range(0))),
                                             ConvolutionSide::right_null,
                                             ScaleVector::constant(part, 256, 0.3));
  const GramMatrix g = gram_matrix(fam);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_eigenvalues(g));
  }
}
BENCHMARK(bm_gram_eigenvalues)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
