#include <doctest.h>

#include <cmath>
#include <random>

#include "wsdf/error.hpp"
#include "wsdf/metrics.hpp"
#include "wsdf/oracle.hpp"

using namespace wsdf;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointCloud c;
  for (std::size_t i = 0; i < n; ++i) c.points.push_back({u(rng), u(rng), u(rng)});
  return c;
}

TriangleMesh unit_right_triangle() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}};
  return m;
}

}  // namespace

TEST_CASE("psnr closed forms") {
  const Image a(4, 3, 3, 0.5);
  const PsnrResult same = psnr(a, a);
  CHECK(same.capped);
  CHECK(same.db == kPsnrCap);
  CHECK(same.mse == 0.0);

  const PsnrResult r = psnr(a, Image(4, 3, 3, 0.6));
  CHECK_FALSE(r.capped);
  CHECK(r.mse == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(r.db == doctest::Approx(20.0).epsilon(1e-12));

  Image checker(8, 8, 3);
  Image inverse(8, 8, 3);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) {
        checker.at(x, y, c) = (x + y) % 2;
        inverse.at(x, y, c) = 1 - (x + y) % 2;
      }
  const PsnrResult zero = psnr(checker, inverse);
  CHECK(zero.mse == 1.0);
  CHECK(zero.db == 0.0);
}

TEST_CASE("psnr rejects mismatched or empty images") {
  CHECK_THROWS_AS(psnr(Image(4, 4, 3), Image(4, 5, 3)), Error);
  CHECK_THROWS_AS(psnr(Image(4, 4, 3), Image(4, 4, 1)), Error);
  CHECK_THROWS_AS(psnr(Image(), Image()), Error);
}

TEST_CASE("psnr decreases as noise grows") {
  Image base(32, 32, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (double& v : base.data) v = u(rng);
  double previous = kPsnrCap;
  for (double sd : {0.01, 0.02, 0.04, 0.08}) {
    std::normal_distribution<double> noise(0.0, sd);
    Image noisy = base;
    for (double& v : noisy.data) v += noise(rng);
    const double db = psnr(base, noisy).db;
    CHECK(db < previous);
    CHECK(db == doctest::Approx(-10.0 * std::log10(sd * sd)).epsilon(0.05));
    previous = db;
  }
}

TEST_CASE("sampled points of a triangle center on its centroid") {
  const PointCloud c = sample_mesh(unit_right_triangle(), 10000, 1);
  REQUIRE(c.points.size() == 10000);
  Vec3 mean;
  for (const Vec3& p : c.points) {
    CHECK(p.x >= -1e-12);
    CHECK(p.y >= -1e-12);
    CHECK(p.x + p.y <= 1.0 + 1e-12);
    CHECK(p.z == 0.0);
    mean += p;
  }
  mean = mean / 10000.0;
  CHECK(std::abs(mean.x - 1.0 / 3.0) < 0.02);
  CHECK(std::abs(mean.y - 1.0 / 3.0) < 0.02);
}

TEST_CASE("triangles are picked in proportion to area") {
  TriangleMesh m;
  // Area 1 at z = 0 and area 3 at z = 5.
  m.vertices = {{0, 0, 0}, {2, 0, 0}, {0, 1, 0}, {0, 0, 5}, {3, 0, 5}, {0, 2, 5}};
  m.triangles = {{0, 1, 2}, {3, 4, 5}};
  constexpr std::int64_t n = 40000;
  const PointCloud c = sample_mesh(m, n, 7);
  double small = 0;
  for (const Vec3& p : c.points) small += p.z == 0.0 ? 1 : 0;
  const double expected = 0.25 * n;
  const double sd = std::sqrt(n * 0.25 * 0.75);
  CHECK(std::abs(small - expected) < 4.0 * sd);
}

TEST_CASE("sampling is deterministic per seed") {
  const PointCloud a = sample_mesh(unit_right_triangle(), 1, 42);
  const PointCloud b = sample_mesh(unit_right_triangle(), 1, 42);
  const PointCloud c = sample_mesh(unit_right_triangle(), 1, 43);
  CHECK(a.points[0] == b.points[0]);
  CHECK_FALSE(a.points[0] == c.points[0]);
}

TEST_CASE("sample_mesh rejects bad input") {
  CHECK_THROWS_AS(sample_mesh(TriangleMesh{}, 10, 0), Error);
  CHECK_THROWS_AS(sample_mesh(unit_right_triangle(), 0, 0), Error);
}

TEST_CASE("chamfer closed forms") {
  const PointCloud a = random_cloud(300, 1);
  CHECK(chamfer(a, a) == 0.0);
  PointCloud p;
  p.points = {{0, 0, 0}};
  PointCloud q;
  q.points = {{0.3, 0.4, 0.0}};
  CHECK(chamfer(p, q) == doctest::Approx(2 * 0.25).epsilon(1e-14));
  CHECK(chamfer(p, q, true) == doctest::Approx(2 * 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(chamfer(PointCloud{}, q), Error);
  CHECK_THROWS_AS(chamfer(p, PointCloud{}), Error);
}

TEST_CASE("chamfer is exactly symmetric") {
  const PointCloud a = random_cloud(700, 2);
  const PointCloud b = random_cloud(450, 3);
  CHECK(chamfer(a, b) == chamfer(b, a));
  CHECK(chamfer(a, b, true) == chamfer(b, a, true));
}

TEST_CASE("k-d tree matches brute force") {
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const PointCloud a = random_cloud(500, seed);
    const PointCloud b = random_cloud(500, seed + 100);
    const KdTree tree(b.points);
    const auto fast = nearest_squared_distances(a.points, tree);
    const auto slow = reference::nearest_squared_distances_brute_force(a.points, b.points);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
    CHECK(std::abs(chamfer(a, b) - reference::chamfer_brute_force(a, b)) <= 1e-9);
    CHECK(std::abs(chamfer(a, b, true) - reference::chamfer_brute_force(a, b, true)) <= 1e-9);
  }
}

TEST_CASE("k-d tree handles duplicates and clustered points") {
  std::vector<Vec3> pts(100, Vec3{0.5, 0.5, 0.5});
  pts.push_back({2, 2, 2});
  const KdTree tree(pts);
  CHECK(tree.size() == 101);
  CHECK(tree.nearest_squared_distance({0.5, 0.5, 0.5}) == 0.0);
  CHECK(tree.nearest_squared_distance({2, 2, 3}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(KdTree(std::vector<Vec3>{}), Error);
}

TEST_CASE("sphere surface samples lie on the sphere") {
  const Sphere s{{1, 2, 3}, 0.7};
  const PointCloud c = sample_sphere_surface(s, 2000, 9);
  Vec3 mean;
  for (const Vec3& p : c.points) {
    CHECK(norm(p - s.center) == doctest::Approx(0.7).epsilon(1e-12));
    mean += p;
  }
  mean = mean / 2000.0;
  CHECK(norm(mean - s.center) < 0.05);
}
