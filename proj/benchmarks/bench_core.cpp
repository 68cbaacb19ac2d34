#include <benchmark/benchmark.h>

#include <bergman/carleson.hpp>
#include <bergman/condexp.hpp>
#include <bergman/lattice.hpp>
#include <bergman/quadrature.hpp>

using namespace bergman;

static void BM_GaussJacobi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_jacobi(n, 0.5, 0.0));
}
BENCHMARK(BM_GaussJacobi)->Arg(64)->Arg(256)->Arg(1024);

static void BM_TestFunctionNorm(benchmark::State& state) {
  const Integrator integ;
  const DiskPoint a(0.0, state.range(0) / 100.0);
  const SpaceParams sp{3.0, 0.5};
  integ.rule(sp.alpha);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integ.bergman_norm([&](Complex z) { return test_function(a, z, sp); }, sp, a.modulus()));
  }
}
BENCHMARK(BM_TestFunctionNorm)->Arg(0)->Arg(90)->Arg(99)->Unit(benchmark::kMillisecond);

static void BM_PsiRadial(benchmark::State& state) {
  const Integrator integ;
  const Measure mu = RadialDensity{-0.5};
  const DiskPoint a(state.range(0) / 100.0);
  for (auto _ : state) benchmark::DoNotOptimize(psi_transform(integ, mu, a, 0.0));
}
BENCHMARK(BM_PsiRadial)->Arg(50)->Arg(99)->Unit(benchmark::kMicrosecond);

static void BM_PsiSup(benchmark::State& state) {
  const Integrator integ;
  const Measure mu = PolyWeighted{Polynomial{1.0, 0.5}, 2.0, 0.0};
  GridSpec grid;
  grid.max_level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(psi_sup(integ, mu, 0.0, 2.0, grid).sup);
}
BENCHMARK(BM_PsiSup)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BuildLattice(benchmark::State& state) {
  const double eps = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_lattice(1.0, eps, 10000).size());
}
BENCHMARK(BM_BuildLattice)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_VerifyCover(benchmark::State& state) {
  const HyperbolicLattice lat = build_lattice(1.0, 0.01, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(verify_cover(lat, 10000).ok());
}
BENCHMARK(BM_VerifyCover)->Unit(benchmark::kMillisecond);

static void BM_BlaschkeLevelSet(benchmark::State& state) {
  const AnalyticSelfMap phi = BlaschkeProduct{{DiskPoint(0.0), DiskPoint(0.5, 0.1), DiskPoint(-0.4, -0.3)}};
  const DiskPoint z(0.2, 0.6);
  for (auto _ : state) benchmark::DoNotOptimize(level_set(phi, z).points.size());
}
BENCHMARK(BM_BlaschkeLevelSet);

static void BM_CertifyArea(benchmark::State& state) {
  const Integrator integ(QuadratureConfig{64, 128});
  CertifyConfig cfg;
  cfg.grid.min_level = 3;
  cfg.grid.max_level = 6;
  cfg.grid.n_theta = 8;
  cfg.overlap_samples = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(integ, WeightedArea{0.0}, {2.0, 0.0}, 1.0, IdentityMap{}, cfg).c1);
  }
}
BENCHMARK(BM_CertifyArea)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
