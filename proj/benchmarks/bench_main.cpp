#include <benchmark/benchmark.h>

#include "aclab/diagnostics.hpp"
#include "aclab/interfaces.hpp"
#include "aclab/levelset.hpp"
#include "aclab/monotonicity.hpp"
#include "aclab/solver.hpp"

using namespace aclab;

namespace {

ScalarField circle(int n) {
    Grid g(2, n, 1.4);
    return prepare_interface(g, 6.0 * g.spacing(), sphere_distance(Vec{}, 0.35));
}

}  // namespace

static void BM_SemiImplicitStep(benchmark::State& state) {
    auto u = circle(static_cast<int>(state.range(0)));
    SolverConfig cfg{0.1 * u.epsilon() * u.epsilon(), Scheme::semi_implicit, 0.0, 1};
    for (auto _ : state) {
        u = step(u, cfg);
        benchmark::DoNotOptimize(u.values().data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(u.size()));
}
BENCHMARK(BM_SemiImplicitStep)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_ExplicitStep(benchmark::State& state) {
    auto u = circle(static_cast<int>(state.range(0)));
    SolverConfig cfg{max_stable_dt(Scheme::explicit_rk2, u.grid(), u.epsilon()), Scheme::explicit_rk2, 0.0, 1};
    for (auto _ : state) {
        u = step(u, cfg);
        benchmark::DoNotOptimize(u.values().data());
    }
}
BENCHMARK(BM_ExplicitStep)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Diagnose(benchmark::State& state) {
    auto u = circle(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(diagnose(u, Region::whole_box()));
}
BENCHMARK(BM_Diagnose)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_StressDivergence(benchmark::State& state) {
    auto u = circle(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(divergence_defect(u));
}
BENCHMARK(BM_StressDivergence)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_GaussianDensity(benchmark::State& state) {
    auto u = circle(256);
    KernelPoint kp{Vec{0.35, 0.0, 0}, 0.01, 1};
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_density(u, kp, TestFunction::constant_one()));
}
BENCHMARK(BM_GaussianDensity)->Unit(benchmark::kMillisecond);

static void BM_ExtractGraph(benchmark::State& state) {
    Grid g(2, static_cast<int>(state.range(0)), 1.0);
    auto u = prepare_interface(g, 6.0 * g.spacing(), graph_distance(g, cosine_profile(0.02, 1.0)));
    for (auto _ : state) benchmark::DoNotOptimize(extract_graph(u, 0.0));
}
BENCHMARK(BM_ExtractGraph)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_DistanceFunction(benchmark::State& state) {
    auto u = circle(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(max_distance_gradient(u));
}
BENCHMARK(BM_DistanceFunction)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
