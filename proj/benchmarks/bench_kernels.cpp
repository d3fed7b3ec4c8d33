#include <benchmark/benchmark.h>

#include "crkfr/crk_core.hpp"
#include "crkfr/limiters.hpp"
#include "crkfr/problems.hpp"
#include "crkfr/solver.hpp"

using namespace crkfr;

static void BM_BuildBasis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(n, PointSet::GL));
}
BENCHMARK(BM_BuildBasis)->DenseRange(1, 7, 2);

static void BM_CrkStagesEuler(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto b = build_basis(n, PointSet::GL);
  const auto tab = default_tableau(n);
  Euler1D eq;
  std::vector<Euler1D::State> u(n + 1);
  for (int p = 0; p <= n; ++p) u[p] = eq.from_primitive(1.0 + 0.1 * p, 0.2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(crk_stages(eq, u, tab, b, 0.0, 0.01, 1e-3));
}
BENCHMARK(BM_CrkStagesEuler)->DenseRange(1, 3);

static void BM_IndicatorAlpha(benchmark::State& state) {
  const auto b = build_basis(3, PointSet::GL);
  const auto n2m = b.nodal_to_modal();
  const std::vector<double> q{1.0, 0.3, 2.0, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(indicator_alpha(q.data(), b, n2m, 1, IndicatorConfig{}));
}
BENCHMARK(BM_IndicatorAlpha);

static void BM_StepBlast(benchmark::State& state) {
  ProblemParams pp;
  pp.nx = 400;
  const auto setup = make_blast(pp);
  SchemeOptions so;
  so.dissipation = static_cast<Dissipation>(state.range(0));
  LimiterOptions lim;
  lim.blend = BlendKind::MH;
  lim.flux_limiter = lim.scaling_limiter = true;
  CrkSolver<Euler1D> s(setup, so, lim);
  const auto u0 = s.initial_field();
  const double dt = s.compute_dt(u0);
  for (auto _ : state) {
    auto u = u0;
    s.step(u, dt);
    benchmark::DoNotOptimize(u.values.data());
  }
  state.SetItemsProcessed(state.iterations() * pp.nx);
}
BENCHMARK(BM_StepBlast)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_StepVortex(benchmark::State& state) {
  ProblemParams pp;
  pp.nx = pp.ny = static_cast<int>(state.range(0));
  const auto setup = make_isentropic_vortex(pp);
  CrkSolver<Euler2D> s(setup, SchemeOptions{}, LimiterOptions{});
  const auto u0 = s.initial_field();
  const double dt = s.compute_dt(u0);
  for (auto _ : state) {
    auto u = u0;
    s.step(u, dt);
    benchmark::DoNotOptimize(u.values.data());
  }
  state.SetItemsProcessed(state.iterations() * pp.nx * pp.ny);
}
BENCHMARK(BM_StepVortex)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
