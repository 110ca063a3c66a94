#include <benchmark/benchmark.h>

#include "bstar/dynamics.hpp"
#include "bstar/energy.hpp"
#include "bstar/fft.hpp"
#include "bstar/ground_state.hpp"
#include "bstar/spectral.hpp"

using namespace bstar;

static void BM_Fft(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, 10.0);
  ComplexField f = gaussian_field(g, 1.5, 1.0);
  auto& fft = FourierTransform::for_size(n);
  for (auto _ : state) {
    fft.forward(f.values(), f.data());
    benchmark::DoNotOptimize(f.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_Fft)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_RieszConvolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, 10.0);
  const RieszKernel k = riesz_kernel(g, 0.5);
  const RealField rho = density(gaussian_field(g, 1.5, 1.0));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_riesz(k, rho));
}
BENCHMARK(BM_RieszConvolution)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_EnergyAndGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, 10.0);
  const EnergyModel model(g, ModelParams(0.5, 0.1, 1.0, 2.7), ZeroModeRule::lattice_matched,
                          Discretization::dealiased);
  const ComplexField phi = gaussian_field(g, 1.5, 2.7);
  for (auto _ : state) benchmark::DoNotOptimize(model.evaluate(phi));
}
BENCHMARK(BM_EnergyAndGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_StrangStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g(n, 10.0);
  const Propagator prop(g, ModelParams(0.5, 0.1, 1.0, 2.7));
  ComplexField psi = gaussian_field(g, 1.5, 2.7);
  for (auto _ : state) {
    psi = prop.step(psi, 0.01);
    benchmark::DoNotOptimize(psi.data().data());
  }
}
BENCHMARK(BM_StrangStep)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
