// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wsdf/certify.hpp"
#include "wsdf/mesh.hpp"
#include "wsdf/metrics.hpp"
#include "wsdf/oracle.hpp"
#include "wsdf/render.hpp"
#include "wsdf/smoothing.hpp"

using namespace wsdf;

namespace {

VoxelGrid sphere(int n) {
  const CubeDomain d = cube_domain(n);
  return make_analytic_grid(Sphere{{0.5, 0.5, 0.5}, 0.3}, d.dims, d.origin, d.spacing);
}

std::vector<double> kernel_for(const VoxelGrid& g) { return gaussian_kernel_1d(1.1, 4.0, g.dims().nx); }

void BM_Convolve(benchmark::State& state) {
  const VoxelGrid g = sphere(static_cast<int>(state.range(0)));
  const auto k = kernel_for(g);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_separable(g.values(), g.dims(), k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void BM_ConvolveSerial(benchmark::State& state) {
  const VoxelGrid g = sphere(static_cast<int>(state.range(0)));
  const auto k = kernel_for(g);
  for (auto _ : state) benchmark::DoNotOptimize(reference::convolve_separable_serial(g.values(), g.dims(), k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

Camera bench_camera(int size) { return look_at({0.5, 0.5, 2.2}, {0.5, 0.5, 0.5}, {0, 1, 0}, size, size, 1.25 * size, 1.2, 3.2); }

void BM_Render(benchmark::State& state) {
  const VoxelGrid g = sphere(64);
  const SmoothedGrid s = smooth(g, SmoothingConfig::from_voxels(1.1, g.spacing()));
  const GridDensityField field(s.grid, TransferConfig{});
  const Camera cam = bench_camera(static_cast<int>(state.range(0)));
  RenderOptions opt;
  opt.step = 0.5 * g.spacing();
  for (auto _ : state) benchmark::DoNotOptimize(render(cam, field, opt));
}

void BM_RenderSerial(benchmark::State& state) {
  const VoxelGrid g = sphere(64);
  const SmoothedGrid s = smooth(g, SmoothingConfig::from_voxels(1.1, g.spacing()));
  const GridDensityField field(s.grid, TransferConfig{});
  const Camera cam = bench_camera(static_cast<int>(state.range(0)));
  const auto density = [&](const Vec3& p) { return field(p); };
  for (auto _ : state) benchmark::DoNotOptimize(reference::render_serial(cam, density, 0.5 * g.spacing(), {0.2, 0.2, 0.2}));
}

std::vector<Vec3> cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> p(n);
  for (auto& v : p) v = {u(rng), u(rng), u(rng)};
  return p;
}

void BM_NearestKdTree(benchmark::State& state) {
  const auto q = cloud(static_cast<std::size_t>(state.range(0)), 1);
  const auto t = cloud(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    const KdTree tree(t);
    benchmark::DoNotOptimize(nearest_squared_distances(q, tree));
  }
}

void BM_NearestBruteForce(benchmark::State& state) {
  const auto q = cloud(static_cast<std::size_t>(state.range(0)), 1);
  const auto t = cloud(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::nearest_squared_distances_brute_force(q, t));
}

void BM_DistanceTransform(benchmark::State& state) {
  const VoxelGrid g = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_distance_transform(g));
}

void BM_DistanceTransformBruteForce(benchmark::State& state) {
  const VoxelGrid g = sphere(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::distance_transform_brute_force(g));
}

void BM_MarchingCubes(benchmark::State& state) {
  const VoxelGrid g = sphere(static_cast<int>(state.range(0)));
  const WeakSdfGrid w = weak_sdf(smooth(g, SmoothingConfig::from_voxels(1.1, g.spacing())));
  for (auto _ : state) benchmark::DoNotOptimize(marching_cubes(w.grid, 0.0));
}

}  // namespace

BENCHMARK(BM_Convolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConvolveSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Render)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestKdTree)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestBruteForce)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceTransform)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistanceTransformBruteForce)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MarchingCubes)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
