#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "wsdf/vec3.hpp"

namespace wsdf {

// Rigid camera-to-world transform. rotation is row-major 3x3.
struct Pose {
  std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3 translation;

  Vec3 rotate(const Vec3& v) const {
    const auto& r = rotation;
    return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
            r[6] * v.x + r[7] * v.y + r[8] * v.z};
  }
};

// Pinhole camera looking down its local -z axis with +y up (the convention
// of the synthetic NeRF scenes). Pixel (u, v) has v growing downwards.
struct Camera {
  int width = 0;
  int height = 0;
  double focal = 0.0;  // pixels
  Pose pose;
  double t_near = 0.0;
  double t_far = 1.0;
};

// Orthonormal rotation (R R^T = I within 1e-9, det = +1), positive
// focal and dims, 0 <= t_near < t_far.
void validate(const Camera& camera);

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
  double t_near = 0.0;
  double t_far = 1.0;

  Vec3 at(double t) const { return origin + direction * t; }
};

// Ray through the center of pixel (u, v).
Ray pixel_ray(const Camera& camera, int u, int v);

// One ray per pixel, row-major (v outer, u inner).
std::vector<Ray> generate_rays(const Camera& camera);

Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height, double focal,
               double t_near, double t_far);

// Cameras on a ring of `count` positions around `target`, alternating
// slightly above and below the equator so every view sees a different
// silhouette. Used to build synthetic fitting scenes.
std::vector<Camera> orbit_cameras(int count, const Vec3& target, double distance, int width, int height,
                                  double focal, double t_near, double t_far, double phase = 0.0);

// Key/value camera file:
//   width 64
//   height 64
//   focal 80
//   pose r00 r01 r02 tx r10 r11 r12 ty r20 r21 r22 tz
//   t_near 0.5
//   t_far 3
// A JSON object with the same keys ("pose" as a 12-element array) is
// accepted as well.
Camera read_camera(const std::filesystem::path& path);
void write_camera(const std::filesystem::path& path, const Camera& camera);

// Loader for "transforms"-style scene descriptions: a JSON object with
// "camera_angle_x" (horizontal field of view, radians) and "frames", each
// holding a 4x4 camera-to-world "transform_matrix". Image size and ray
// bounds are not part of that format and come from the caller (a "w"/"h"
// pair in the file overrides width/height).
struct TransformsFrame {
  Camera camera;
  std::string file_path;
};
std::vector<TransformsFrame> read_transforms(const std::filesystem::path& path, int width, int height,
                                             double t_near, double t_far);

}  // namespace wsdf
