#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "she/balayage.hpp"
#include "she/coeffs.hpp"
#include "she/convergence.hpp"
#include "she/legendre.hpp"
#include "she/model.hpp"
#include "she/spectral.hpp"

namespace {

using namespace she;

const PlanetProfile& cusp() {
  static const PlanetProfile p = [] {
    PlanetSpec s;
    s.theta0 = 1.0;
    s.peak = PowerCuspPeak{0.5, 1.0, 2.0, {}};
    s.weight = SmoothPowerWeight{1, 1.0, {}};
    return build_profile(s);
  }();
  return p;
}

void BM_LegendreRecurrence(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(legendre_eval(n, 0.5403));
  state.SetComplexityN(n);
}
BENCHMARK(BM_LegendreRecurrence)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_GaussNodes(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_nodes(m));
}
BENCHMARK(BM_GaussNodes)->Arg(16)->Arg(64)->Arg(256);

void BM_CoeffCuspPlanet(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto& p = cusp();
  for (auto _ : state) benchmark::DoNotOptimize(coeff_scaled(p, n));
}
BENCHMARK(BM_CoeffCuspPlanet)->Arg(10)->Arg(100)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_CoeffMollifiedMass(benchmark::State& state) {
  const auto body = mollified_point_mass(0.9, std::acos(0.5), 1.0, 0.004);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coeff_scaled(body, n, {1e-12, 0.0}));
}
BENCHMARK(BM_CoeffMollifiedMass)->Arg(10)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FourierTail(benchmark::State& state) {
  const auto f = appendix_function(1.5, 0.3, 3);
  const double k = -static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fourier_eval(f, -0.6, 0.6, k, {1e-10, 0.0}, {0.0}));
}
BENCHMARK(BM_FourierTail)->Arg(100)->Arg(1000)->Arg(20000)->Unit(benchmark::kMicrosecond);

void BM_RootTest(benchmark::State& state) {
  const auto s = coeff_series(point_mass_planet(0.9, 1.0, 1.0), 0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convergence_verdict(s));
}
BENCHMARK(BM_RootTest)->Arg(500)->Arg(2000);

void BM_PlemeljJump(benchmark::State& state) {
  const auto mu = mu_from_point_masses({{{0.0, 0.0, 0.6}, 1.0}, {{0.3, -0.2, 0.5}, 0.5}});
  for (auto _ : state) benchmark::DoNotOptimize(plemelj_jump(mu, 0.5));
}
BENCHMARK(BM_PlemeljJump)->Unit(benchmark::kMillisecond);

void BM_AnalyticityProbe(benchmark::State& state) {
  const auto mu = mu_from_point_masses({{{0.0, 0.0, 0.6}, 1.0}});
  for (auto _ : state) benchmark::DoNotOptimize(analyticity_probe(mu, 0.5));
}
BENCHMARK(BM_AnalyticityProbe)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
