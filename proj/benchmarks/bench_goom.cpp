#include <random>

#include <benchmark/benchmark.h>

#include "goom/harness.hpp"
#include "goom/lyapunov.hpp"
#include "goom/pscan.hpp"

namespace {

using namespace goom;

template <class T>
GoomMatrix<T> random_goom(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<T> nd;
  RealMatrix<T> m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(gen);
  return GoomMatrix<T>::from_real(m);
}

template <class T>
void BM_Lmme(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_goom<T>(n, 1), b = random_goom<T>(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lmme(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}
BENCHMARK_TEMPLATE(BM_Lmme, double)->RangeMultiplier(2)->Range(4, 128);
BENCHMARK_TEMPLATE(BM_Lmme, float)->RangeMultiplier(2)->Range(4, 128);

void BM_RealMatmul(benchmark::State& state) {
  const auto n = state.range(0);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n), b = Eigen::MatrixXd::Random(n, n);
  for (auto _ : state) {
    Eigen::MatrixXd c = a * b;
    benchmark::DoNotOptimize(c.data());
  }
}
BENCHMARK(BM_RealMatmul)->RangeMultiplier(2)->Range(4, 128);

void BM_ScanSequential(benchmark::State& state) {
  const auto leaves = random_scan_leaves(static_cast<std::size_t>(state.range(0)), 8, 1, false);
  for (auto _ : state) benchmark::DoNotOptimize(scan_sequential<double>(leaves, affine_combiner<double>()));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanSequential)->Arg(1 << 10)->Arg(1 << 13)->Unit(benchmark::kMillisecond);

void BM_ScanParallel(benchmark::State& state) {
  const auto leaves = random_scan_leaves(static_cast<std::size_t>(state.range(0)), 8, 1, false);
  const int workers = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(scan_parallel<double>(leaves, affine_combiner<double>(), 64, workers));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScanParallel)->ArgsProduct({{1 << 10, 1 << 13}, {1, 4}})->Unit(benchmark::kMillisecond);

const JacobianChain& lorenz_chain() {
  static const JacobianChain chain = [] {
    const auto sys = lorenz_system();
    return integrate_chain(sys, sys.default_initial_state, 1000, 10000, 1);
  }();
  return chain;
}

void BM_SpectrumSequential(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_sequential(lorenz_chain(), Eigen::MatrixXd::Identity(3, 3)));
}
BENCHMARK(BM_SpectrumSequential)->Unit(benchmark::kMillisecond);

void BM_SpectrumParallel(benchmark::State& state) {
  ParallelOptions opts;
  opts.workers = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(spectrum_parallel(lorenz_chain(), Eigen::MatrixXd::Identity(3, 3), opts));
}
BENCHMARK(BM_SpectrumParallel)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ChainGoom64(benchmark::State& state) {
  ChainConfig cfg;
  cfg.d = static_cast<std::size_t>(state.range(0));
  cfg.T_max = 1000;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_chain(cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ChainGoom64)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
