#include "wsdf/scene.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "wsdf/error.hpp"

namespace wsdf {
namespace {

constexpr double kDistanceFactor = 2.2;
constexpr double kVisibleHalfWidth = 0.75;

std::vector<Camera> ring(const SceneLayout& layout, int count, double phase) {
  const double e = layout.extent;
  const double distance = kDistanceFactor * e;
  const double focal = 0.5 * layout.image_size * distance / (kVisibleHalfWidth * e);
  const Vec3 center{0.5 * e, 0.5 * e, 0.5 * e};
  return orbit_cameras(count, center, distance, layout.image_size, layout.image_size, focal, distance - e,
                       distance + e, phase);
}

std::string numbered(const char* prefix, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%03zu.%s", prefix, i, ext);
  return buf;
}

std::vector<View> read_numbered(const std::filesystem::path& dir, const char* prefix, const char* image_prefix) {
  std::vector<View> views;
  for (std::size_t i = 0;; ++i) {
    const auto cam_path = dir / numbered(prefix, i, "txt");
    if (!std::filesystem::exists(cam_path)) break;
    std::filesystem::path img_path = dir / numbered(image_prefix, i, "ppm");
    if (!std::filesystem::exists(img_path)) img_path = dir / numbered(image_prefix, i, "png");
    View v{read_camera(cam_path), read_image(img_path)};
    views.push_back(std::move(v));
  }
  return views;
}

Image to_rgb(Image img) {
  if (img.channels == 3) return img;
  Image out(img.width, img.height, 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, img.channels == 1 ? 0 : std::min(c, img.channels - 1));
    }
  }
  return out;
}

std::vector<View> read_transforms_views(const std::filesystem::path& dir, const std::filesystem::path& file,
                                        double t_near, double t_far) {
  std::vector<View> views;
  if (!std::filesystem::exists(dir / file)) return views;
  // The image size is not part of the format, so the first frame's image sets it.
  auto frames = read_transforms(dir / file, 1, 1, t_near, t_far);
  for (auto& frame : frames) {
    std::filesystem::path img_path = dir / frame.file_path;
    if (!img_path.has_extension()) img_path += ".png";
    Image img = to_rgb(read_image(img_path));
    const double scale = static_cast<double>(img.width) / frame.camera.width;
    frame.camera.focal *= scale;
    frame.camera.width = img.width;
    frame.camera.height = img.height;
    views.push_back({frame.camera, std::move(img)});
  }
  return views;
}

}  // namespace

void validate(const SceneLayout& layout) {
  require(layout.views >= 1, "scene needs at least one training view");
  require(layout.held_out >= 0, "held-out view count must be >= 0");
  require(layout.image_size >= 1, "image size must be >= 1");
  require(std::isfinite(layout.extent) && layout.extent > 0.0, "scene extent must be positive");
}

std::vector<Camera> training_cameras(const SceneLayout& layout) {
  validate(layout);
  return ring(layout, layout.views, 0.0);
}

std::vector<Camera> held_out_cameras(const SceneLayout& layout) {
  validate(layout);
  if (layout.held_out == 0) return {};
  return ring(layout, layout.held_out, std::numbers::pi / layout.views + 0.3);
}

Scene render_scene(const VoxelGrid& ground_truth, const SceneLayout& layout, const ForwardModel& model) {
  Scene scene;
  for (const Camera& cam : training_cameras(layout)) {
    scene.train.push_back({cam, render_model(ground_truth, cam, model).color_image()});
  }
  for (const Camera& cam : held_out_cameras(layout)) {
    scene.held_out.push_back({cam, render_model(ground_truth, cam, model).color_image()});
  }
  return scene;
}

std::vector<std::filesystem::path> write_scene(const std::filesystem::path& dir, const Scene& scene) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCategory::kIo, dir.string() + ": cannot create directory: " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::vector<View>& views, const char* cam_prefix, const char* img_prefix) {
    for (std::size_t i = 0; i < views.size(); ++i) {
      written.push_back(dir / numbered(cam_prefix, i, "txt"));
      write_camera(written.back(), views[i].camera);
      written.push_back(dir / numbered(img_prefix, i, "ppm"));
      write_image(written.back(), views[i].target);
    }
  };
  emit(scene.train, "cam", "img");
  emit(scene.held_out, "holdout", "holdout");
  return written;
}

Scene read_scene(const std::filesystem::path& dir, double t_near, double t_far) {
  if (!std::filesystem::is_directory(dir)) fail(ErrorCategory::kIo, dir.string() + ": not a scene directory");
  Scene scene;
  if (std::filesystem::exists(dir / "transforms_train.json")) {
    scene.train = read_transforms_views(dir, "transforms_train.json", t_near, t_far);
    scene.held_out = read_transforms_views(dir, "transforms_test.json", t_near, t_far);
  } else {
    scene.train = read_numbered(dir, "cam", "img");
    scene.held_out = read_numbered(dir, "holdout", "holdout");
  }
  if (scene.train.empty()) fail(ErrorCategory::kIo, dir.string() + ": no training views (expected cam_000.txt)");
  for (View& v : scene.train) v.target = to_rgb(std::move(v.target));
  for (View& v : scene.held_out) v.target = to_rgb(std::move(v.target));
  return scene;
}

}  // namespace wsdf
