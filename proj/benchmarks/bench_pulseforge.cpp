#include <pulseforge/design_coherence.hpp>
#include <pulseforge/design_population.hpp>
#include <pulseforge/feasibility.hpp>
#include <pulseforge/lindblad.hpp>
#include <pulseforge/rates.hpp>
#include <pulseforge/tomography.hpp>

#include <benchmark/benchmark.h>

using namespace pulseforge;

namespace {

DecoherenceRates device() { return rates_from_times({9.5, 4.6, 6.0, 1.9}); }

PopulationTarget reference_population() {
  PopulationTarget t;
  t.p1_final = 0.3;
  t.p2_final = 0.2;
  t.t_f = 3.0;
  return t;
}

void BM_LindbladRhs(benchmark::State& state) {
  const MasterEquation eq(device());
  const DensityMatrix rho = params_to_matrix({0.3, 0.2, 0.1, 0.1, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(eq.rhs(rho, {1.3, 2.7}));
}
BENCHMARK(BM_LindbladRhs);

void BM_Evolve3us(benchmark::State& state) {
  const DecoherenceRates r = device();
  const PopulationDesign d = try_design_population(reference_population(), r);
  const double dt = 1e-3 * static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evolve(ground_state(), d.pulses, r, dt, 1));
}
BENCHMARK(BM_Evolve3us)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DesignPopulation(benchmark::State& state) {
  const DecoherenceRates r = device();
  DesignOptions opt;
  opt.verify = state.range(0) != 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(try_design_population(reference_population(), r, opt));
}
BENCHMARK(BM_DesignPopulation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_DesignCoherence(benchmark::State& state) {
  const DecoherenceRates r = device();
  CoherenceTarget t;
  t.h2_final = 0.2;
  t.h3_final = 0.3;
  for (auto _ : state) benchmark::DoNotOptimize(try_design_coherence(t, r));
}
BENCHMARK(BM_DesignCoherence)->Unit(benchmark::kMillisecond);

void BM_FeasibilityCell(benchmark::State& state) {
  const DecoherenceRates r = device();
  for (auto _ : state) benchmark::DoNotOptimize(classify_population(0.3, 0.2, 3.0, r));
}
BENCHMARK(BM_FeasibilityCell)->Unit(benchmark::kMillisecond);

void BM_TomographyRoundTrip(benchmark::State& state) {
  const DensityMatrix rho = params_to_matrix({0.3, 0.2, 0.1, 0.1, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_coherences(tomo_rotations(rho)));
}
BENCHMARK(BM_TomographyRoundTrip);

}  // namespace
BENCHMARK_MAIN();
