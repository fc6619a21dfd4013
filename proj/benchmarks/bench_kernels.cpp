// Timings for the sweep kernels, serial twin vs the OpenMP form, over a few
// input sizes. The parallel kernels reduce by max only, so both forms return
// identical values; each pair below asserts that before timing.

#include <benchmark/benchmark.h>

#include <cstdlib>
#include <vector>

#include <eqmap/kernels.hpp>
#include <eqmap/linalg.hpp>

namespace {

using eqmap::Mat;
namespace kern = eqmap::kernels;

std::vector<Mat> random_cloud(int count, int dim, std::uint64_t seed) {
  eqmap::linalg::NormalSampler rng(seed);
  std::vector<Mat> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = rng.complex_normal();
    out.push_back(m);
  }
  return out;
}

std::vector<Eigen::Vector2d> random_points(int count, std::uint64_t seed) {
  eqmap::linalg::NormalSampler rng(seed);
  std::vector<Eigen::Vector2d> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.emplace_back(rng(), rng());
  return out;
}

void require_equal(double a, double b) {
  if (a != b) std::abort();  // the twins must agree bit for bit
}

void bm_directed_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_cloud(n, 3, 11);
  const auto b = random_cloud(n, 3, 12);
  require_equal(kern::directed_max_min_frob_serial(a, b),
                kern::directed_max_min_frob(a, b));
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::directed_max_min_frob_serial(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(bm_directed_serial)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void bm_directed_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = random_cloud(n, 3, 11);
  const auto b = random_cloud(n, 3, 12);
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::directed_max_min_frob(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(bm_directed_parallel)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

void bm_coverage_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = random_points(n / 16, 21);
  const auto cloud = random_points(n, 22);
  require_equal(kern::coverage_max_min_serial(grid, cloud),
                kern::coverage_max_min(grid, cloud));
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::coverage_max_min_serial(grid, cloud));
}
BENCHMARK(bm_coverage_serial)->Arg(4096)->Arg(16384)->Arg(65536);

void bm_coverage_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = random_points(n / 16, 21);
  const auto cloud = random_points(n, 22);
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::coverage_max_min(grid, cloud));
}
BENCHMARK(bm_coverage_parallel)->Arg(4096)->Arg(16384)->Arg(65536);

void bm_closure_serial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = random_cloud(n, 2, 33);
  require_equal(kern::closure_residual_pairs_serial(pts, 50.0),
                kern::closure_residual_pairs(pts, 50.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::closure_residual_pairs_serial(pts, 50.0));
}
BENCHMARK(bm_closure_serial)->Arg(32)->Arg(128)->Arg(512);

void bm_closure_parallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pts = random_cloud(n, 2, 33);
  for (auto _ : state)
    benchmark::DoNotOptimize(kern::closure_residual_pairs(pts, 50.0));
}
BENCHMARK(bm_closure_parallel)->Arg(32)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
