// Serial reference kernels against their OpenMP versions.
//   OMP_NUM_THREADS=k ./bench_kernels

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "dch/kernels.hpp"

namespace k = dch::kernels;

namespace {

std::vector<double> random_data(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

template <auto Kernel>
void BM_convolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto in = random_data(n, 1);
  std::vector<double> out(n);
  const k::ConvolutionSpec spec{2.0, 60.0 / static_cast<double>(n), 30.0, k::Support::periodic};
  for (auto _ : state) {
    Kernel(in, out, spec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void BM_axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_data(n, 2);
  auto y = random_data(n, 3);
  for (auto _ : state) {
    Kernel(1e-3, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n * 2 * sizeof(double)));
}

template <auto Kernel>
void BM_ridge(benchmark::State& state) {
  const auto points = static_cast<std::size_t>(state.range(0));
  const auto samples = random_data(2048, 4);
  const k::RidgeGrid grid{3, points, 2.0, 4.0 / static_cast<double>(points)};
  std::vector<double> out(grid.total());
  for (auto _ : state) {
    Kernel(samples, 20.0, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <auto Kernel>
void BM_ep_residual(benchmark::State& state) {
  const auto points = static_cast<std::size_t>(state.range(0));
  const k::RidgeGrid grid{3, points, 2.0, 4.0 / static_cast<double>(points)};
  std::vector<std::vector<double>> u, m;
  for (unsigned c = 0; c < 3; ++c) {
    u.push_back(random_data(grid.total(), 10 + c));
    m.push_back(random_data(grid.total(), 20 + c));
  }
  const auto prev = random_data(grid.total(), 30);
  const auto next = random_data(grid.total(), 31);
  const double* up[] = {u[0].data(), u[1].data(), u[2].data()};
  const double* mp[] = {m[0].data(), m[1].data(), m[2].data()};
  k::EpStencilInput in{grid, up, mp, prev.data(), next.data(), 0.01, 1};
  std::vector<double> out(grid.total());
  for (auto _ : state) {
    Kernel(in, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_convolve<k::serial::convolve>)->Name("convolve/serial")->RangeMultiplier(2)->Range(512, 4096);
BENCHMARK(BM_convolve<k::omp::convolve>)->Name("convolve/omp")->RangeMultiplier(2)->Range(512, 4096);
BENCHMARK(BM_axpy<k::serial::axpy>)->Name("axpy/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_axpy<k::omp::axpy>)->Name("axpy/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_ridge<k::serial::ridge_sample>)->Name("ridge_sample/serial")->Arg(32)->Arg(64);
BENCHMARK(BM_ridge<k::omp::ridge_sample>)->Name("ridge_sample/omp")->Arg(32)->Arg(64);
BENCHMARK(BM_ep_residual<k::serial::ep_residual>)->Name("ep_residual/serial")->Arg(32)->Arg(64);
BENCHMARK(BM_ep_residual<k::omp::ep_residual>)->Name("ep_residual/omp")->Arg(32)->Arg(64);

BENCHMARK_MAIN();
