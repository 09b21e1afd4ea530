#include <benchmark/benchmark.h>

#include <random>

#include "chwave/derivatives.hpp"
#include "chwave/newton.hpp"
#include "chwave/reduced.hpp"
#include "chwave/spectral.hpp"
#include "chwave/stability.hpp"
#include "chwave/tens.hpp"

using namespace chwave;

namespace {

void BM_FftRoundTrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Fft fft(n);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> x(static_cast<std::size_t>(n)), y(x.size());
  for (auto& v : x) v = u(rng);
  std::vector<Complex> a(x.size());
  for (auto _ : state) {
    fft.forward(x, a);
    fft.inverse(a, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_FftRoundTrip)->RangeMultiplier(2)->Range(128, 2048);

void BM_StencilApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  PeriodicStencil d3(3, n, 1.0);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0), y(x.size());
  for (int i = 0; i < n; ++i) x[i] = std::sin(kTwoPi * i / n);
  for (auto _ : state) {
    d3.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_StencilApply)->Arg(256)->Arg(1024);

void BM_ShootReduced(benchmark::State& state) {
  const auto p = make_params(0.7, 0.12, 1.0);
  ShootingConfig sc;
  sc.n_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_reduced(p, sc));
}
BENCHMARK(BM_ShootReduced)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_NewtonFull(benchmark::State& state) {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_wave(p, n, {GuessKind::A1, 1, +1}));
}
BENCHMARK(BM_NewtonFull)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  const int n = static_cast<int>(state.range(0));
  const auto w = solve_wave(p, n, {GuessKind::A1, 1, +1});
  for (auto _ : state) benchmark::DoNotOptimize(max_growth_rate(w.profile, p.eps));
}
BENCHMARK(BM_Spectrum)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TensSteps(benchmark::State& state) {
  const auto p = make_params(0.5, 1.5, 1.0, 5e-4);
  const int n = static_cast<int>(state.range(0));
  TensConfig cfg;
  cfg.n_modes = n;
  TensStepper stepper(p, n, cfg.dt);
  std::vector<Complex> a = to_spectral(random_initial(p, cfg)).coeffs;
  double t = 0.0;
  for (auto _ : state) {
    for (int k = 0; k < 100; ++k) {
      stepper.advance(a, t);
      t += cfg.dt;
    }
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_TensSteps)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
