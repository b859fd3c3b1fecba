#include <benchmark/benchmark.h>

#include <cmath>

#include "lidarwx/filters.hpp"
#include "lidarwx/projection.hpp"
#include "lidarwx/rng.hpp"
#include "lidarwx/spatial.hpp"
#include "lidarwx/wavelet.hpp"
#include "lidarwx/weather.hpp"

using namespace lidarwx;

namespace {

PointCloud make_cloud(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    PointCloud pc;
    pc.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = rng.uniform(5.0, 80.0);
        const double az = rng.uniform(0.0, 6.283185307179586);
        const double el = rng.uniform(-0.3, 0.1);
        pc.x[i] = r * std::cos(el) * std::cos(az);
        pc.y[i] = r * std::cos(el) * std::sin(az);
        pc.z[i] = r * std::sin(el);
        pc.intensity[i] = rng.uniform(0.0, 255.0);
        pc.range[i] = r;
    }
    return pc;
}

Grid make_grid(std::size_t h, std::size_t v, std::size_t c, std::uint64_t seed) {
    Rng rng(seed);
    Grid grid(h, v, c);
    for (auto& value : grid.data) value = rng.uniform(-10.0, 10.0);
    return grid;
}

void bm_index_build(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        SpatialIndex index(pc);
        benchmark::DoNotOptimize(index);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_index_build)->Arg(10000)->Arg(120000);

void bm_knn_query(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 2);
    const SpatialIndex index(pc);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.knn(i, 10));
        i = (i + 7919) % pc.size();
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_knn_query)->Arg(10000)->Arg(120000);

void bm_sor_filter(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 3);
    const SpatialIndex index(pc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(filters::sor_filter(pc, index, 10, 1.0));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_sor_filter)->Arg(10000)->Arg(60000);

void bm_dsor_filter(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 4);
    const SpatialIndex index(pc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(filters::dsor_filter(pc, index, 10, 0.01, 0.05));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_dsor_filter)->Arg(10000)->Arg(60000);

void bm_wavelet_forward(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const Grid grid = make_grid(dim, dim, 4, 5);
    const LiftingOperators ops;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lifting_forward_2d(grid, ops));
    }
    state.SetItemsProcessed(state.iterations() * grid.data.size());
}
BENCHMARK(bm_wavelet_forward)->Arg(64)->Arg(256);

void bm_wavelet_roundtrip(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const Grid grid = make_grid(dim, dim, 4, 6);
    const LiftingOperators ops;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lifting_inverse_2d(lifting_forward_2d(grid, ops), ops));
    }
    state.SetItemsProcessed(state.iterations() * grid.data.size());
}
BENCHMARK(bm_wavelet_roundtrip)->Arg(64)->Arg(256);

void bm_triple_projection(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 7);
    FeatureMatrix fm;
    fm.n = pc.size();
    fm.channels = 4;
    fm.values.assign(fm.n * fm.channels, 1.5);
    const ProjectionBounds bounds = frame_bounds(pc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_triple_planes(pc, fm, {64, 64, 64}, bounds));
    }
    state.SetItemsProcessed(state.iterations() * pc.size());
}
BENCHMARK(bm_triple_projection)->Arg(10000)->Arg(120000);

void bm_simulate_snow(benchmark::State& state) {
    const PointCloud pc = make_cloud(static_cast<std::size_t>(state.range(0)), 8);
    LabelSet labels;
    labels.resize(pc.size());
    const SensorModel sensor = sensor_preset("hdl64-like");
    std::uint64_t seed = 0;
    for (auto _ : state) {
        Rng rng(seed++);
        benchmark::DoNotOptimize(simulate_snow(pc, labels, SnowParams{2.5}, sensor, rng));
    }
    state.SetItemsProcessed(state.iterations() * pc.size());
}
BENCHMARK(bm_simulate_snow)->Arg(10000)->Arg(120000);

}  // namespace

BENCHMARK_MAIN();
