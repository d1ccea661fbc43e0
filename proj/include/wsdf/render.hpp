#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "wsdf/camera.hpp"
#include "wsdf/grid.hpp"
#include "wsdf/image.hpp"
#include "wsdf/smoothing.hpp"
#include "wsdf/transfer.hpp"

namespace wsdf {

// Depth value of pixels whose opacity stays below 1/2.
inline constexpr double kNoDepth = -1.0;

struct MarchResult {
  double opacity = 0.0;        // sum of w_i = 1 - transmittance
  double depth = kNoDepth;     // sum w_i t_i / opacity, or kNoDepth
  double transmittance = 1.0;  // after the last sample
};

// Quadrature layout along [t_near, t_far]: interval i covers
// [t_near + i*step, t_near + (i+1)*step] (the last one cut at t_far) and is
// sampled at its midpoint.
inline int sample_count(double t_near, double t_far, double step) {
  if (!(t_far > t_near)) return 0;
  return static_cast<int>(std::ceil((t_far - t_near) / step - 1e-9));
}

// Volume-rendering quadrature: alpha_i = 1 - exp(-sigma_i * delta_i),
// T_i = prod_{j<i} (1 - alpha_j), w_i = T_i * alpha_i. Only samples with
// index in [first, last) are evaluated; the caller guarantees the density
// is zero elsewhere. If `trace` is given it receives T_i before each
// evaluated sample followed by the final transmittance.
template <typename DensityFn>
MarchResult march_ray_range(const Ray& ray, DensityFn&& density_at, double step, int first, int last,
                            std::vector<double>* trace = nullptr) {
  MarchResult r;
  double transmittance = 1.0;
  double depth_acc = 0.0;
  for (int i = first; i < last; ++i) {
    const double t0 = ray.t_near + i * step;
    const double t1 = std::min(t0 + step, ray.t_far);
    const double t = 0.5 * (t0 + t1);
    const double sigma = density_at(ray.at(t));
    if (trace != nullptr) trace->push_back(transmittance);
    if (sigma <= 0.0) continue;
    const double alpha = -std::expm1(-sigma * (t1 - t0));
    const double w = transmittance * alpha;
    depth_acc += w * t;
    transmittance *= 1.0 - alpha;
  }
  if (trace != nullptr) trace->push_back(transmittance);
  r.transmittance = transmittance;
  r.opacity = 1.0 - transmittance;
  r.depth = r.opacity >= 0.5 ? depth_acc / std::max(r.opacity, 1e-8) : kNoDepth;
  return r;
}

template <typename DensityFn>
MarchResult march_ray(const Ray& ray, DensityFn&& density_at, double step, std::vector<double>* trace = nullptr) {
  return march_ray_range(ray, density_at, step, 0, sample_count(ray.t_near, ray.t_far, step), trace);
}

// Density g(x) = density(f_hat(x)) with f_hat trilinearly sampled from a
// smoothed grid.
class GridDensityField {
 public:
  GridDensityField(const VoxelGrid& smoothed, const TransferConfig& transfer);

  double operator()(const Vec3& p) const { return density(sample_trilinear(*smoothed_, p), transfer_); }

  const VoxelGrid& smoothed() const { return *smoothed_; }
  const TransferConfig& transfer() const { return transfer_; }
  // True when the field is exactly zero outside the grid bounding box, so
  // rays only need to be marched across the box.
  bool zero_outside() const { return zero_outside_; }

 private:
  const VoxelGrid* smoothed_;
  TransferConfig transfer_;
  bool zero_outside_;
};

// Index range [first, last) of the samples of `ray` that fall inside the
// box [lo, hi] (empty range when the ray misses it).
std::pair<int, int> samples_in_box(const Ray& ray, const Vec3& lo, const Vec3& hi, double step);

// Samples of `ray` that can carry nonzero density under `field`.
std::pair<int, int> active_samples(const Ray& ray, const GridDensityField& field, double step);

struct RenderOptions {
  double step = 0.0;  // world units; <= 0 picks spacing / 2
  Vec3 albedo{0.2, 0.2, 0.2};
};

struct RenderedImage {
  int width = 0;
  int height = 0;
  std::vector<double> opacity;  // per pixel, [0, 1]
  std::vector<double> depth;    // per pixel, t or kNoDepth
  std::vector<double> color;    // interleaved RGB, albedo over a white background

  Image color_image() const;
  Image opacity_image() const;
};

// Composites albedo * opacity over white.
inline double composite(double opacity, double albedo) { return albedo * opacity + (1.0 - opacity); }

double resolve_step(const RenderOptions& options, const VoxelGrid& grid);

// OpenMP-parallel over pixels; results do not depend on the thread count.
RenderedImage render(const Camera& camera, const GridDensityField& field, const RenderOptions& options);

// Convenience: smooth, then render.
RenderedImage render_occupancy(const Camera& camera, const VoxelGrid& occupancy, const SmoothingConfig& smoothing,
                               const TransferConfig& transfer, const RenderOptions& options);

// Depth encodings: 16-bit PNG with 0 for background and t mapped linearly
// from [t_near, t_far] onto [1, 65535]; raw f32 keeps kNoDepth as-is.
std::vector<std::uint16_t> encode_depth16(const RenderedImage& image, double t_near, double t_far);

namespace reference {

// Single-threaded render through a type-erased density callback, marching
// every sample from t_near to t_far.
RenderedImage render_serial(const Camera& camera, const std::function<double(const Vec3&)>& density_at,
                            double step, const Vec3& albedo);

}  // namespace reference

}  // namespace wsdf
