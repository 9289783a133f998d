#include <random>

#include <benchmark/benchmark.h>

#include <fjmgt/convolution.hpp>
#include <fjmgt/fjmgt_solver.hpp>
#include <fjmgt/spectral.hpp>

using namespace fjmgt;

static void BM_PiWeights(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kernel = KernelSpec::abel(0.75);
  for (auto _ : state) benchmark::DoNotOptimize(pi_weights(kernel, 1e-3, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PiWeights)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

// one history sum over n stored steps for 64 modes
static void BM_HistorySum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t modes = 64;
  const auto w = pi_weights(KernelSpec::abel(0.75), 1e-3, n + 1);
  HistoryBuffer hist(modes);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> row(modes);
  for (std::size_t k = 0; k < n; ++k) {
    for (double& v : row) v = g(rng);
    hist.append(row);
  }
  std::vector<double> out(modes);
  for (auto _ : state) {
    history_sum(w, hist, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HistorySum)->RangeMultiplier(4)->Range(256, 4096)->Complexity();

static void BM_NonlinearGalerkin(benchmark::State& state) {
  const auto modes = static_cast<std::size_t>(state.range(0));
  SpectralSpace space(1.0, modes);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  auto field = [&] {
    ModalVector xi(modes);
    for (double& v : xi) v = g(rng) * 1e-2;
    return space.synthesize(xi);
  };
  const FieldGrids f{field(), field(), field(), field(), field(), field()};
  const Nonlinearity nl{Family::KuznetsovBlackstock, 1.0, 0.1, 0.1, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_galerkin(space, nl, f));
}
BENCHMARK(BM_NonlinearGalerkin)->Arg(16)->Arg(64)->Arg(128);

// full solve to T = 1 at dt = 1e-3 with 64 modes (one point of a sweep)
static void BM_Solve(benchmark::State& state) {
  SpectralSpace space(1.0, 64);
  MediumParams p;
  p.k1 = 1.0;
  p.tau = 0.05;
  p.kernel = KernelSpec::abel(0.75);
  const auto data = sine_profile_data(space, 1e-2);
  const double T = static_cast<double>(state.range(0)) * 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, data, {}, T, 1e-3, space));
}
BENCHMARK(BM_Solve)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
