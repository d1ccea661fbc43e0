#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "wsdf/error.hpp"
#include "wsdf/normal.hpp"
#include "wsdf/smoothing.hpp"

using namespace wsdf;

TEST_CASE("tiny sigma gives the delta kernel") {
  const auto k = gaussian_kernel_1d(0.2, 4.0);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == 1.0);
}

TEST_CASE("unit sigma kernel has 9 symmetric weights summing to one") {
  const auto k = gaussian_kernel_1d(1.0, 4.0);
  REQUIRE(k.size() == 9);
  CHECK(std::abs(std::accumulate(k.begin(), k.end(), 0.0) - 1.0) < 1e-12);
  for (std::size_t i = 0; i < 4; ++i) CHECK(k[i] == k[8 - i]);
  CHECK(k[5] / k[4] == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  for (std::size_t i = 0; i < 4; ++i) CHECK(k[i] < k[i + 1]);
}

TEST_CASE("kernel longer than the axis is rejected with advice") {
  try {
    gaussian_kernel_1d(2.0, 4.0, 10);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("sigma") != std::string::npos);
  }
  CHECK_THROWS_AS(gaussian_kernel_1d(0.0, 4.0), Error);
  CHECK_THROWS_AS(validate(SmoothingConfig{1.0, 1.5}), Error);
  CHECK_THROWS_AS(validate(SmoothingConfig{-1.0, 4.0}), Error);
}

TEST_CASE("constant grids") {
  const VoxelGrid ones = testing::constant_grid({24, 24, 24}, 1.0);
  const SmoothedGrid s = smooth(ones, SmoothingConfig{1.5, 4.0});
  CHECK(s.grid.kind() == FieldKind::kSmoothed);
  CHECK(s.source_binary);
  // Interior voxels farther than the kernel radius from the boundary.
  for (int k = 6; k < 18; ++k) {
    for (int j = 6; j < 18; ++j) {
      for (int i = 6; i < 18; ++i) CHECK(std::abs(s.grid.at(i, j, k) - 1.0) < 1e-6);
    }
  }
  const SmoothedGrid z = smooth(testing::constant_grid({8, 8, 8}, 0.0), SmoothingConfig{0.8, 4.0});
  for (double v : z.grid.values()) CHECK(v == 0.0);
  const SmoothedGrid soft = smooth(testing::constant_grid({24, 24, 24}, 0.3), SmoothingConfig{1.0, 4.0});
  CHECK_FALSE(soft.source_binary);
  CHECK(soft.grid.at(12, 12, 12) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("step response matches the normal CDF") {
  const CubeDomain d = cube_domain(64);
  const VoxelGrid g = make_analytic_grid(Halfspace{{0, 0, 1}, 0.5}, d.dims, d.origin, d.spacing);
  for (double sigma_vox : {1.5, 2.0, 3.0}) {
    const SmoothedGrid s = smooth(g, SmoothingConfig::from_voxels(sigma_vox, d.spacing));
    const double sigma = sigma_vox * d.spacing;
    for (double dist : {-2.3, -1.0, -0.4, 0.0, 0.25, 1.0, 1.7, 3.0}) {
      const Vec3 p{0.5, 0.5, 0.5 + dist * sigma};
      CHECK(std::abs(sample_trilinear(s.grid, p) - normal_cdf(dist)) < 1e-2);
    }
  }
}

TEST_CASE("separable smoothing equals the direct 3D convolution") {
  for (int n : {8, 16, 32}) {
    const VoxelGrid g = testing::random_grid({n, n, n}, static_cast<std::uint64_t>(n), n == 16, 0.1);
    const SmoothingConfig cfg = SmoothingConfig::from_voxels(n == 8 ? 0.9 : 1.3, 0.1);
    const SmoothedGrid a = smooth(g, cfg);
    const SmoothedGrid b = smooth_direct_reference(g, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(a.grid[i] - b.grid[i]));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("delta kernel leaves the grid unchanged") {
  const VoxelGrid g = testing::random_grid({7, 6, 5}, 4);
  const SmoothingConfig cfg{0.1, 4.0};
  const SmoothedGrid a = smooth(g, cfg);
  const SmoothedGrid b = smooth_direct_reference(g, cfg);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(a.grid[i] == g[i]);
    CHECK(b.grid[i] == g[i]);
  }
}

TEST_CASE("all-ones 8^3 grid: both methods agree") {
  const VoxelGrid g = testing::constant_grid({8, 8, 8}, 1.0);
  const SmoothingConfig cfg{0.8, 4.0};
  const SmoothedGrid a = smooth(g, cfg);
  const SmoothedGrid b = smooth_direct_reference(g, cfg);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a.grid[i] - b.grid[i]) < 1e-12);
}

TEST_CASE("parallel convolution equals the serial reference bit for bit") {
  const VoxelGrid g = testing::random_grid({20, 17, 13}, 99);
  const auto kernel = gaussian_kernel_1d(1.4, 4.0);
  const auto a = convolve_separable(g.values(), g.dims(), kernel);
  const auto b = reference::convolve_separable_serial(g.values(), g.dims(), kernel);
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("smoothing is monotone in the input") {
  const VoxelGrid a = testing::random_grid({12, 12, 12}, 5);
  std::vector<double> bigger(a.values().begin(), a.values().end());
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : bigger) v = std::min(1.0, v + 0.3 * u(rng));
  const VoxelGrid b = a.with_values(bigger, FieldKind::kOccupancy);
  const SmoothingConfig cfg{1.2, 4.0};
  const SmoothedGrid sa = smooth(a, cfg);
  const SmoothedGrid sb = smooth(b, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(sa.grid[i] <= sb.grid[i]);
}

TEST_CASE("zero fill never increases the total mass") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const VoxelGrid g = testing::random_grid({14, 15, 16}, seed, seed % 2 == 0);
    const SmoothedGrid s = smooth(g, SmoothingConfig{0.5 + 0.3 * static_cast<double>(seed), 4.0});
    const double before = std::accumulate(g.values().begin(), g.values().end(), 0.0);
    const double after = std::accumulate(s.grid.values().begin(), s.grid.values().end(), 0.0);
    CHECK(after <= before + 1e-9);
  }
}

TEST_CASE("smoothed values stay in [0, 1]") {
  const VoxelGrid g = testing::random_grid({20, 20, 20}, 12, true);
  const SmoothedGrid s = smooth(g, SmoothingConfig{2.0, 4.0});
  CHECK(s.grid.min_value() >= 0.0);
  CHECK(s.grid.max_value() <= 1.0);
}

TEST_CASE("smoothing an idempotent constant interior") {
  const VoxelGrid g = testing::constant_grid({30, 30, 30}, 0.6);
  const SmoothingConfig cfg{1.0, 4.0};
  const SmoothedGrid once = smooth(g, cfg);
  const SmoothedGrid twice = smooth(once.grid.with_values(
                                        std::vector<double>(once.grid.values().begin(), once.grid.values().end()),
                                        FieldKind::kOccupancy),
                                    cfg);
  CHECK(twice.grid.at(15, 15, 15) == doctest::Approx(once.grid.at(15, 15, 15)).epsilon(1e-12));
  CHECK(once.grid.at(15, 15, 15) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("adjoint equals the transpose of the brute-force Jacobian") {
  const GridDims dims{6, 6, 6};
  const VoxelGrid geometry(dims, {}, 1.0);
  const SmoothingConfig cfg{0.7, 4.0};
  const auto kernel = gaussian_kernel_1d(0.7, 4.0, 6);
  const std::size_t n = dims.count();
  // J[i][j] = d out_i / d in_j.
  std::vector<std::vector<double>> jac(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = reference::convolve_separable_serial(e, dims, kernel);
    for (std::size_t i = 0; i < n; ++i) jac[i][j] = col[i];
  }
  const VoxelGrid upstream = testing::random_grid(dims, 31);
  const std::vector<double> up(upstream.values().begin(), upstream.values().end());
  const auto adj = smooth_adjoint(up, geometry, cfg);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double expected = 0.0;
    for (std::size_t i = 0; i < n; ++i) expected += jac[i][j] * up[i];
    worst = std::max(worst, std::abs(adj[j] - expected));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("soft expectation: Monte Carlo E[f(p + eps)] agrees with the smoothed sample") {
  // Zero-mean Gaussian noise on the stored (interpolated) field. The
  // sampled kernel matches the continuous Gaussian once sigma spans a few
  // voxels.
  const CubeDomain d = cube_domain(64);
  const VoxelGrid g = make_analytic_grid(Sphere{{0.5, 0.5, 0.5}, 0.3}, d.dims, d.origin, d.spacing);
  const double sigma = 4.0 * d.spacing;
  const SmoothedGrid s = smooth(g, SmoothingConfig{sigma, 4.0});
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.15, 0.85);
  std::normal_distribution<double> noise(0.0, sigma);
  const int n = 100000;
  for (int probe = 0; probe < 16; ++probe) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = sample_trilinear(g, p + Vec3{noise(rng), noise(rng), noise(rng)});
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = std::max(sum2 / n - mean * mean, 0.25 / n);
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - sample_trilinear(s.grid, p)) <= 4.0 * se);
  }
}

TEST_CASE("smoothing requires an occupancy grid") {
  const VoxelGrid g(GridDims{4, 4, 4}, {}, 1.0, FieldKind::kWeakSdf);
  CHECK_THROWS_AS(smooth(g, SmoothingConfig{0.5, 4.0}), Error);
}
