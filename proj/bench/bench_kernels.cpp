// Serial reference kernels against their OpenMP counterparts.
//   ./hyperslice_bench --benchmark_filter=Table
// Pair names differ only in the Serial/Parallel suffix.

#include <benchmark/benchmark.h>

#include "hyperslice/expectation.hpp"
#include "hyperslice/monte_carlo.hpp"
#include "hyperslice/zonotope.hpp"

using namespace hyperslice;

namespace {

FlatOrientation orientation(std::size_t n, std::size_t k)
{
    SeededRng rng(2026);
    return sample_orientation(rng, n, k);
}

Zonotope projected_cube(std::size_t n, std::size_t k)
{
    return project(Body::cube(n).zonotope(), orientation(n, k).normal_basis());
}

SimulationConfig mc_config(std::size_t samples)
{
    SimulationConfig c;
    c.n = 5;
    c.k = 2;
    c.samples = samples;
    c.seed = 7;
    return c;
}

void BM_TableSerial(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Body cube = Body::cube(n);
    const FlatOrientation o = orientation(n, n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(probability_table_serial(cube, o));
}

void BM_TableParallel(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Body cube = Body::cube(n);
    const FlatOrientation o = orientation(n, n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(probability_table(cube, o));
}

void BM_VolumeSerial(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Zonotope z = projected_cube(n, n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(volume_serial(z, z.dim()));
}

void BM_VolumeParallel(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const Zonotope z = projected_cube(n, n / 2);
    for (auto _ : state) benchmark::DoNotOptimize(volume(z, z.dim()));
}

void BM_EstimateSerial(benchmark::State& state)
{
    const SimulationConfig c = mc_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_expected_vertices_serial(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EstimateParallel(benchmark::State& state)
{
    const SimulationConfig c = mc_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(estimate_expected_vertices(c));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TableSerial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TableParallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VolumeSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VolumeParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateSerial)->Arg(16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateParallel)->Arg(16384)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
