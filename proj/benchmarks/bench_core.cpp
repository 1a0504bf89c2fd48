#include <random>

#include <benchmark/benchmark.h>

#include <condensate/bulk_spectrum.hpp>
#include <condensate/graph_spectrum.hpp>
#include <condensate/statmech.hpp>
#include <condensate/thermo.hpp>

using namespace condensate;

static void BM_GraphSpectrum(benchmark::State& state) {
  const auto lattice = DefectLattice::build(static_cast<std::size_t>(state.range(0)),
                                            WeightSpec::random(0.1, 10.0, 42));
  const auto m = build_path_laplacian(lattice);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_tridiagonal(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GraphSpectrum)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_GraphBisection(benchmark::State& state) {
  const auto lattice = DefectLattice::build(static_cast<std::size_t>(state.range(0)),
                                            WeightSpec::random(0.1, 10.0, 42));
  const auto m = build_path_laplacian(lattice);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_bisection(m));
}
BENCHMARK(BM_GraphBisection)->RangeMultiplier(4)->Range(16, 1024);

static void BM_SeparableSpectrum(benchmark::State& state) {
  const WireParams w{1.0, static_cast<double>(state.range(0)), OuterBoundary::dirichlet};
  for (auto _ : state) benchmark::DoNotOptimize(separable_spectrum(w, statmech_cutoff(w, 1.0)));
}
BENCHMARK(BM_SeparableSpectrum)->Arg(25)->Arg(100)->Arg(400);

static void BM_Fd2dGround(benchmark::State& state) {
  const WireParams w{1.0, 6.0, OuterBoundary::dirichlet};
  const double h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fd2d_spectrum(w, h, 1));
}
BENCHMARK(BM_Fd2dGround)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_SolveMu(benchmark::State& state) {
  const double L = static_cast<double>(state.range(0));
  FiniteSystem sys;
  sys.wire = {1.0, L};
  sys.bulk = separable_spectrum(sys.wire, statmech_cutoff(sys.wire, 1.0));
  sys.surface_levels =
      graph_spectrum(DefectLattice::build(static_cast<std::size_t>(L), WeightSpec::constant_weight(1.0)));
  PhysicalParams p;
  p.beta = 1.0;
  p.alpha = 0.5;
  p.lambda = 1.0;
  p.rho = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_mu(p.rho, sys, p));
}
BENCHMARK(BM_SolveMu)->Arg(25)->Arg(100)->Arg(400);

static void BM_RhoExc(benchmark::State& state) {
  const auto method = state.range(0) == 0 ? RhoExcMethod::series : RhoExcMethod::quadrature;
  const double e0 = bulk_threshold(1.0);
  for (auto _ : state) {
    for (double gap : {1e-4, 1e-2, 1.0, 10.0})
      benchmark::DoNotOptimize(rho_exc(1.0, e0 - gap, 1.0, method));
  }
  state.SetLabel(state.range(0) == 0 ? "series" : "quadrature");
}
BENCHMARK(BM_RhoExc)->Arg(0)->Arg(1);
BENCHMARK_MAIN();
