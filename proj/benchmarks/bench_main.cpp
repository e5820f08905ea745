#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "phasegrating/action.hpp"
#include "phasegrating/bessel.hpp"
#include "phasegrating/rn_oracle.hpp"
#include "phasegrating/spectrum.hpp"
#include "phasegrating/trajectories.hpp"

using namespace phasegrating;

static void BM_BesselTable(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j_table(n_max, 3.0));
}
BENCHMARK(BM_BesselTable)->Arg(8)->Arg(40)->Arg(200);

static void BM_S1Quadrature(benchmark::State& state) {
  const auto kd = fixtures::kd_case(3.0, 0.05, 1e-3);
  const auto ew = fixtures::ew_case(3.0, 100.0, 0.5);
  const GratingModel m = state.range(0) == 0 ? kd.model() : ew.model();
  const BeamParameters& beam = state.range(0) == 0 ? kd.beam : ew.beam;
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(s1_quadrature(m, beam, x));
    x += 0.01;
  }
}
BENCHMARK(BM_S1Quadrature)->Arg(0)->Arg(1);

static void BM_ShootingWavefunction(benchmark::State& state) {
  const auto kd = fixtures::kd_case(3.0, 0.05);
  const GratingModel m = kd.model();
  for (auto _ : state) {
    const ShootingSolver solver(m, kd.beam, reference_plane(m, kd.beam));
    benchmark::DoNotOptimize(solver.exit_wavefunction(64));
  }
}
BENCHMARK(BM_ShootingWavefunction)->Unit(benchmark::kMillisecond);

static void BM_EvolveModes(benchmark::State& state) {
  const auto kd = fixtures::kd_case(3.0, 0.05);
  const bool kinetic = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_modes(kd.grating, kd.beam, kinetic, 23));
}
BENCHMARK(BM_EvolveModes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
