#include <doctest.h>

#include <cmath>
#include <fstream>
#include <tuple>

#include "helpers.hpp"
#include "wsdf/camera.hpp"
#include "wsdf/error.hpp"

using namespace wsdf;

namespace {

Camera axis_camera(int w, int h, double f) {
  Camera c;
  c.width = w;
  c.height = h;
  c.focal = f;
  c.t_near = 0.1;
  c.t_far = 5.0;
  return c;
}

}  // namespace

TEST_CASE("center pixel looks down -z") {
  const Camera c = axis_camera(5, 7, 10.0);
  const Ray r = pixel_ray(c, 2, 3);
  CHECK(r.direction.x == doctest::Approx(0.0));
  CHECK(r.direction.y == doctest::Approx(0.0));
  CHECK(r.direction.z == doctest::Approx(-1.0));
}

TEST_CASE("one unit-length ray per pixel, row-major") {
  const Camera c = axis_camera(16, 9, 12.0);
  const auto rays = generate_rays(c);
  REQUIRE(rays.size() == 16u * 9u);
  for (const Ray& r : rays) CHECK(std::abs(norm(r.direction) - 1.0) <= 1e-12);
  // u grows to the right (+x), v grows downwards (-y).
  CHECK(rays[1].direction.x > rays[0].direction.x);
  CHECK(rays[16].direction.y < rays[0].direction.y);
}

TEST_CASE("corner pixel angle follows pinhole geometry") {
  for (auto [w, h, f] : {std::tuple{64, 48, 50.0}, std::tuple{31, 31, 20.0}}) {
    const Camera c = axis_camera(w, h, f);
    const Ray r = pixel_ray(c, 0, 0);
    // Pixel centers sit (W - 1)/2 and (H - 1)/2 pixels from the axis.
    const double expected = std::atan(std::hypot(0.5 * (w - 1), 0.5 * (h - 1)) / f);
    CHECK(std::abs(std::acos(-r.direction.z) - expected) <= 1e-9);
  }
}

TEST_CASE("look_at aims the optical axis at the target") {
  const Vec3 eye{2.0, -1.0, 0.5};
  const Vec3 target{0.5, 0.5, 0.5};
  const Camera c = look_at(eye, target, {0, 0, 1}, 9, 9, 20.0, 0.1, 4.0);
  CHECK_NOTHROW(validate(c));
  const Ray r = pixel_ray(c, 4, 4);
  const Vec3 expected = normalized(target - eye);
  CHECK(norm(r.direction - expected) < 1e-12);
  // Up in the image is up in the world.
  CHECK(pixel_ray(c, 4, 0).direction.z > r.direction.z);
}

TEST_CASE("orbit cameras all look at the target from the given distance") {
  const Vec3 target{0.5, 0.5, 0.5};
  const auto cams = orbit_cameras(8, target, 2.2, 17, 17, 30.0, 1.2, 3.2);
  REQUIRE(cams.size() == 8);
  for (const Camera& c : cams) {
    CHECK(norm(c.pose.translation - target) == doctest::Approx(2.2));
    CHECK(norm(pixel_ray(c, 8, 8).direction - normalized(target - c.pose.translation)) < 1e-12);
  }
}

TEST_CASE("camera validation") {
  Camera c = axis_camera(4, 4, 2.0);
  CHECK_NOTHROW(validate(c));
  Camera bad = c;
  bad.pose.rotation = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.pose.rotation = {1, 1e-6, 0, 0, 1, 0, 0, 0, 1};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.t_far = bad.t_near;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.t_near = -0.1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.focal = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("camera files round-trip and accept JSON") {
  const auto dir = testing::scratch_dir("camera_io");
  const Camera c = look_at({1.5, 2.0, -0.5}, {0.5, 0.5, 0.5}, {0, 0, 1}, 40, 30, 55.5, 0.25, 4.5);
  write_camera(dir / "c.txt", c);
  const Camera r = read_camera(dir / "c.txt");
  CHECK(r.width == 40);
  CHECK(r.height == 30);
  CHECK(r.focal == c.focal);
  CHECK(r.t_near == c.t_near);
  CHECK(r.t_far == c.t_far);
  CHECK(r.pose.rotation == c.pose.rotation);
  CHECK(r.pose.translation == c.pose.translation);
  {
    std::ofstream out(dir / "c.json");
    out << R"({"width": 8, "height": 6, "focal": 9.5, "t_near": 0.5, "t_far": 3,
               "pose": [1, 0, 0, 0.5, 0, 1, 0, 0.5, 0, 0, 1, 2.5]})";
  }
  const Camera j = read_camera(dir / "c.json");
  CHECK(j.width == 8);
  CHECK(j.focal == 9.5);
  CHECK(j.pose.translation == Vec3{0.5, 0.5, 2.5});
}

TEST_CASE("malformed camera files are I/O errors naming the path") {
  const auto dir = testing::scratch_dir("camera_bad");
  {
    std::ofstream out(dir / "bad.txt");
    out << "width 4\nheight 4\nfocal 3\npose 1 0 0 0 0 1 0 0\nt_near 0\nt_far 1\n";
  }
  try {
    read_camera(dir / "bad.txt");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::kIo);
    CHECK(std::string(e.what()).find("bad.txt") != std::string::npos);
  }
  CHECK_THROWS_AS(read_camera(dir / "missing.txt"), Error);
}

TEST_CASE("transforms-style scene files") {
  const auto dir = testing::scratch_dir("camera_transforms");
  {
    std::ofstream out(dir / "transforms.json");
    out << R"({"camera_angle_x": 0.6911112070083618,
      "frames": [
        {"file_path": "./train/r_0", "transform_matrix": [[-0.99999994, 0.0, 0.0, 0.0],
          [0.0, 0.73411, -0.6790, -2.737], [0.0, -0.6790, 0.73411, 2.959], [0, 0, 0, 1]]},
        {"file_path": "./train/r_1", "transform_matrix": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 4], [0, 0, 0, 1]]}
      ]})";
  }
  const auto frames = read_transforms(dir / "transforms.json", 800, 800, 2.0, 6.0);
  REQUIRE(frames.size() == 2);
  CHECK(frames[0].file_path == "./train/r_0");
  CHECK(frames[0].camera.focal == doctest::Approx(0.5 * 800 / std::tan(0.5 * 0.6911112070083618)));
  CHECK_NOTHROW(validate(frames[0].camera));
  CHECK(frames[1].camera.pose.translation == Vec3{0, 0, 4});
  CHECK(pixel_ray(frames[1].camera, 400, 400).direction.z == doctest::Approx(-1.0));
}
