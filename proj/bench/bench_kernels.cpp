// Serial reference kernels against their OpenMP counterparts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "relest/estimation.hpp"
#include "relest/graph.hpp"
#include "relest/kernels.hpp"
#include "relest/topology.hpp"

namespace k = relest::kernels;

namespace {

std::vector<double> laplacian_data(std::size_t n) {
  const auto g = relest::erdos_renyi(n, 8.0 / double(n), 1).graph;
  const auto nl = relest::normalized_laplacian(g);
  return {nl.data().begin(), nl.data().end()};
}

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

void BM_JacobiSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = laplacian_data(n);
  for (auto _ : state) benchmark::DoNotOptimize(k::jacobi_serial(a, n));
}

void BM_JacobiParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = laplacian_data(n);
  for (auto _ : state) benchmark::DoNotOptimize(k::jacobi_parallel(a, n));
}

void BM_EccentricitiesSerial(benchmark::State& state) {
  const auto g = relest::erdos_renyi(std::size_t(state.range(0)), 0.02, 2).graph;
  for (auto _ : state) benchmark::DoNotOptimize(k::eccentricities_serial(g));
}

void BM_EccentricitiesParallel(benchmark::State& state) {
  const auto g = relest::erdos_renyi(std::size_t(state.range(0)), 0.02, 2).graph;
  for (auto _ : state) benchmark::DoNotOptimize(k::eccentricities_parallel(g));
}

void BM_StepDense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = relest::erdos_renyi(n, 8.0 / double(n), 3).graph;
  const auto f = relest::f_eta_matrix(g, 0.2);
  const auto x = random_vector(n, 1), u = random_vector(n, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    k::consensus_step_dense(f.data(), n, x, u, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_StepLocal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = relest::erdos_renyi(n, 8.0 / double(n), 3).graph;
  const auto x = random_vector(n, 1), u = random_vector(n, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    k::consensus_step_local(g, x, u, 0.2, out);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_JacobiSerial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiParallel)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EccentricitiesSerial)->Arg(500)->Arg(2000);
BENCHMARK(BM_EccentricitiesParallel)->Arg(500)->Arg(2000);
BENCHMARK(BM_StepDense)->Arg(512)->Arg(2048);
BENCHMARK(BM_StepLocal)->Arg(512)->Arg(2048);

BENCHMARK_MAIN();
