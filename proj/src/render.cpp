#include "wsdf/render.hpp"

#include <limits>

#include "wsdf/error.hpp"

namespace wsdf {

GridDensityField::GridDensityField(const VoxelGrid& smoothed, const TransferConfig& transfer)
    : smoothed_(&smoothed), transfer_(transfer), zero_outside_(density(0.0, transfer) == 0.0) {
  validate(transfer_);
}

std::pair<int, int> samples_in_box(const Ray& ray, const Vec3& lo, const Vec3& hi, double step) {
  double t_enter = ray.t_near;
  double t_exit = ray.t_far;
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < lo[a] || o > hi[a]) return {0, 0};
      continue;
    }
    double ta = (lo[a] - o) / d;
    double tb = (hi[a] - o) / d;
    if (ta > tb) std::swap(ta, tb);
    t_enter = std::max(t_enter, ta);
    t_exit = std::min(t_exit, tb);
  }
  const int n = sample_count(ray.t_near, ray.t_far, step);
  if (!(t_exit >= t_enter)) return {0, 0};
  // Widen by one sample on each side; samples outside the box read zero anyway.
  const int first = std::max(0, static_cast<int>(std::floor((t_enter - ray.t_near) / step)) - 1);
  const int last = std::min(n, static_cast<int>(std::ceil((t_exit - ray.t_near) / step)) + 1);
  return {first, std::max(first, last)};
}

std::pair<int, int> active_samples(const Ray& ray, const GridDensityField& field, double step) {
  if (field.zero_outside()) return samples_in_box(ray, field.smoothed().bbox_min(), field.smoothed().bbox_max(), step);
  return {0, sample_count(ray.t_near, ray.t_far, step)};
}

Image RenderedImage::color_image() const {
  Image img(width, height, 3);
  img.data = color;
  return img;
}

Image RenderedImage::opacity_image() const {
  Image img(width, height, 1);
  img.data = opacity;
  return img;
}

double resolve_step(const RenderOptions& options, const VoxelGrid& grid) {
  const double step = options.step > 0.0 ? options.step : 0.5 * grid.spacing();
  require(std::isfinite(step) && step > 0.0, "render step must be positive");
  return step;
}

RenderedImage render(const Camera& camera, const GridDensityField& field, const RenderOptions& options) {
  validate(camera);
  const double step = resolve_step(options, field.smoothed());
  const std::size_t pixels = static_cast<std::size_t>(camera.width) * static_cast<std::size_t>(camera.height);
  RenderedImage out;
  out.width = camera.width;
  out.height = camera.height;
  out.opacity.assign(pixels, 0.0);
  out.depth.assign(pixels, kNoDepth);
  out.color.assign(3 * pixels, 1.0);
  const auto count = static_cast<std::int64_t>(pixels);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t p = 0; p < count; ++p) {
    const int u = static_cast<int>(p % camera.width);
    const int v = static_cast<int>(p / camera.width);
    const Ray ray = pixel_ray(camera, u, v);
    const auto [first, last] = active_samples(ray, field, step);
    const MarchResult m = march_ray_range(ray, field, step, first, last);
    const auto px = static_cast<std::size_t>(p);
    out.opacity[px] = m.opacity;
    out.depth[px] = m.depth;
    for (int c = 0; c < 3; ++c) out.color[3 * px + static_cast<std::size_t>(c)] = composite(m.opacity, options.albedo[c]);
  }
  return out;
}

RenderedImage render_occupancy(const Camera& camera, const VoxelGrid& occupancy, const SmoothingConfig& smoothing,
                               const TransferConfig& transfer, const RenderOptions& options) {
  const SmoothedGrid smoothed = smooth(occupancy, smoothing);
  return render(camera, GridDensityField(smoothed.grid, transfer), options);
}

std::vector<std::uint16_t> encode_depth16(const RenderedImage& image, double t_near, double t_far) {
  std::vector<std::uint16_t> out(image.depth.size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = image.depth[i];
    if (d == kNoDepth) continue;
    const double u = std::clamp((d - t_near) / (t_far - t_near), 0.0, 1.0);
    out[i] = static_cast<std::uint16_t>(1 + std::lround(u * 65534.0));
  }
  return out;
}

namespace reference {

RenderedImage render_serial(const Camera& camera, const std::function<double(const Vec3&)>& density_at,
                            double step, const Vec3& albedo) {
  validate(camera);
  RenderedImage out;
  out.width = camera.width;
  out.height = camera.height;
  for (const Ray& ray : generate_rays(camera)) {
    const MarchResult m = march_ray(ray, density_at, step);
    out.opacity.push_back(m.opacity);
    out.depth.push_back(m.depth);
    for (int c = 0; c < 3; ++c) out.color.push_back(composite(m.opacity, albedo[c]));
  }
  return out;
}

}  // namespace reference

}  // namespace wsdf
