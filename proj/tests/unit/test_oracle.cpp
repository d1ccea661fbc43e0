#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "wsdf/error.hpp"
#include "wsdf/oracle.hpp"

using namespace wsdf;

TEST_CASE("analytic sphere distances") {
  const Sphere s{{0, 0, 0}, 1.0};
  CHECK(analytic_sdf(s, {0, 0, 0}) == doctest::Approx(1.0));
  CHECK(analytic_sdf(s, {2, 0, 0}) == doctest::Approx(-1.0));
  CHECK(analytic_sdf(s, {0, 0.6, 0.8}) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("analytic box distances") {
  const Box b{{0, 0, 0}, {1, 1, 1}};
  CHECK(analytic_sdf(b, {0.5, 0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(std::abs(analytic_sdf(b, {1.0, 0.5, 0.5})) < 1e-15);
  CHECK(analytic_sdf(b, {0.5, 0.5, 1.25}) == doctest::Approx(-0.25));
  // Outside past a corner the distance is Euclidean to the corner.
  CHECK(analytic_sdf(b, {2, 2, 1}) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(analytic_sdf(b, {0.1, 0.5, 0.5}) == doctest::Approx(0.1));
}

TEST_CASE("analytic halfspace distance is the signed offset") {
  const Halfspace h{{0, 0, 2}, 0.5};
  CHECK(analytic_sdf(h, {3, -1, 0.75}) == doctest::Approx(0.25));
  CHECK(analytic_sdf(h, {0, 0, 0}) == doctest::Approx(-0.5));
}

TEST_CASE("analytic SDFs are eikonal away from the medial axis") {
  const AnalyticShape shapes[] = {Sphere{{0.5, 0.5, 0.5}, 0.3}, Box{{0.2, 0.3, 0.25}, {0.7, 0.8, 0.65}},
                                  Halfspace{{1, 2, -1}, 0.1}};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-6;
  for (const auto& shape : shapes) {
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
      const Vec3 p{u(rng), u(rng), u(rng)};
      Vec3 g;
      for (int a = 0; a < 3; ++a) {
        Vec3 dp;
        dp[a] = h;
        g[a] = (analytic_sdf(shape, p + dp) - analytic_sdf(shape, p - dp)) / (2 * h);
      }
      // The box's medial axis and the sphere center have kinks; skip points
      // where the one-sided derivatives disagree.
      bool smooth = true;
      for (int a = 0; a < 3; ++a) {
        Vec3 dp;
        dp[a] = h;
        const double fwd = (analytic_sdf(shape, p + dp) - analytic_sdf(shape, p)) / h;
        const double bwd = (analytic_sdf(shape, p) - analytic_sdf(shape, p - dp)) / h;
        if (std::abs(fwd - bwd) > 1e-3) smooth = false;
      }
      if (!smooth) continue;
      ++checked;
      CHECK(norm(g) == doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK(checked > 200);
  }
}

TEST_CASE("EDT of a single occupied voxel follows the 3-4-5 triangle") {
  VoxelGrid g(GridDims{12, 12, 12}, {0, 0, 0}, 0.5, FieldKind::kOccupancy);
  g.set(2, 2, 2, 1.0);
  const DistanceTransform dt = exact_distance_transform(g);
  CHECK_FALSE(dt.saturated);
  CHECK(dt.distances.at(5, 6, 2) == doctest::Approx(-5.0 * 0.5).epsilon(1e-15));
  // The occupied voxel is one spacing from its nearest empty neighbor.
  CHECK(dt.distances.at(2, 2, 2) == doctest::Approx(0.5));
  CHECK(dt.distances.kind() == FieldKind::kScalar);
}

TEST_CASE("EDT of a halfspace grid is linear in z") {
  const CubeDomain d = cube_domain(16);
  const VoxelGrid g = make_analytic_grid(Halfspace{{0, 0, 1}, 0.5}, d.dims, d.origin, d.spacing);
  const DistanceTransform dt = exact_distance_transform(g);
  for (int k = 0; k < 16; ++k) {
    const double expected = k >= 8 ? (k - 7) * d.spacing : -(8 - k) * d.spacing;
    for (int j = 0; j < 16; j += 5) {
      for (int i = 0; i < 16; i += 3) CHECK(std::abs(dt.distances.at(i, j, k) - expected) < 1e-9);
    }
  }
}

TEST_CASE("separable EDT equals brute force on random grids") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(seed == 3 ? 0.05 : 0.5);
    VoxelGrid g(GridDims{12, 12, 12}, {0.1, -0.2, 0.3}, 0.25, FieldKind::kOccupancy);
    for (std::size_t i = 0; i < g.size(); ++i) g.set(i, coin(rng) ? 1.0 : 0.0);
    const auto fast = exact_distance_transform(g);
    const auto slow = reference::distance_transform_brute_force(g);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(fast.distances[i] == slow.distances[i]);
  }
}

TEST_CASE("EDT of anisotropic dims equals brute force") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.3);
  VoxelGrid g(GridDims{5, 9, 7}, {0, 0, 0}, 1.0, FieldKind::kOccupancy);
  for (std::size_t i = 0; i < g.size(); ++i) g.set(i, coin(rng) ? 1.0 : 0.0);
  const auto fast = exact_distance_transform(g);
  const auto slow = reference::distance_transform_brute_force(g);
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(fast.distances[i] == slow.distances[i]);
}

TEST_CASE("EDT of a single-class grid saturates to the diagonal") {
  const VoxelGrid ones = testing::constant_grid({4, 5, 6}, 1.0, 0.5);
  const auto dt = exact_distance_transform(ones);
  CHECK(dt.saturated);
  // Diagonal between the outermost voxel centers.
  const double diag = 0.5 * std::sqrt(9.0 + 16.0 + 25.0);
  for (double v : dt.distances.values()) CHECK(v == doctest::Approx(diag));
  const auto dt0 = exact_distance_transform(testing::constant_grid({4, 5, 6}, 0.0, 0.5));
  for (double v : dt0.distances.values()) CHECK(v == doctest::Approx(-diag));
}

TEST_CASE("EDT rejects soft grids") {
  const VoxelGrid soft = testing::constant_grid({4, 4, 4}, 0.3);
  CHECK_THROWS_AS(exact_distance_transform(soft), Error);
}

TEST_CASE("sphere surface samples lie on the sphere and are deterministic") {
  const Sphere s{{0.5, 0.4, 0.3}, 0.25};
  const PointCloud a = sample_sphere_surface(s, 1000, 7);
  const PointCloud b = sample_sphere_surface(s, 1000, 7);
  REQUIRE(a.points.size() == 1000);
  Vec3 mean;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(norm(a.points[i] - s.center) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(a.points[i].x == b.points[i].x);
    mean = mean + a.points[i] * 1e-3;
  }
  CHECK(norm(mean - s.center) < 0.02);
}
