#include "wsdf/camera.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wsdf/error.hpp"

namespace wsdf {

void validate(const Camera& camera) {
  require(camera.width > 0 && camera.height > 0, "camera width and height must be positive");
  require(std::isfinite(camera.focal) && camera.focal > 0.0, "camera focal length must be positive");
  require(std::isfinite(camera.t_near) && std::isfinite(camera.t_far) && camera.t_near >= 0.0 &&
              camera.t_near < camera.t_far,
          "camera needs 0 <= t_near < t_far");
  require(is_finite(camera.pose.translation), "camera translation must be finite");
  const auto& r = camera.pose.rotation;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += r[3 * a + k] * r[3 * b + k];
      require(std::abs(s - (a == b ? 1.0 : 0.0)) <= 1e-9, "camera rotation is not orthonormal");
    }
  }
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  require(det > 0.0, "camera rotation must have determinant +1");
}

Ray pixel_ray(const Camera& camera, int u, int v) {
  const Vec3 local{(u + 0.5 - 0.5 * camera.width) / camera.focal, -(v + 0.5 - 0.5 * camera.height) / camera.focal,
                   -1.0};
  return {camera.pose.translation, normalized(camera.pose.rotate(local)), camera.t_near, camera.t_far};
}

std::vector<Ray> generate_rays(const Camera& camera) {
  validate(camera);
  std::vector<Ray> rays;
  rays.reserve(static_cast<std::size_t>(camera.width) * static_cast<std::size_t>(camera.height));
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) rays.push_back(pixel_ray(camera, u, v));
  }
  return rays;
}

Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, int width, int height, double focal,
               double t_near, double t_far) {
  const Vec3 back = normalized(eye - target);
  const Vec3 right = normalized(cross(up, back));
  const Vec3 true_up = cross(back, right);
  Camera cam;
  cam.width = width;
  cam.height = height;
  cam.focal = focal;
  cam.t_near = t_near;
  cam.t_far = t_far;
  cam.pose.translation = eye;
  cam.pose.rotation = {right.x, true_up.x, back.x, right.y, true_up.y, back.y, right.z, true_up.z, back.z};
  return cam;
}

std::vector<Camera> orbit_cameras(int count, const Vec3& target, double distance, int width, int height,
                                  double focal, double t_near, double t_far, double phase) {
  require(count >= 1, "need at least one camera");
  std::vector<Camera> cams;
  cams.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double azimuth = phase + 2.0 * std::numbers::pi * i / count;
    const double elevation = (i % 2 == 0 ? 1.0 : -1.0) * 0.45;
    const Vec3 dir{std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                   std::sin(elevation)};
    cams.push_back(look_at(target + dir * distance, target, {0.0, 0.0, 1.0}, width, height, focal, t_near, t_far));
  }
  return cams;
}

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
  fail(ErrorCategory::kIo, path.string() + ": " + what);
}

Camera camera_from_json(const nlohmann::json& j, const std::filesystem::path& path) {
  Camera cam;
  try {
    cam.width = j.at("width").get<int>();
    cam.height = j.at("height").get<int>();
    cam.focal = j.at("focal").get<double>();
    cam.t_near = j.at("t_near").get<double>();
    cam.t_far = j.at("t_far").get<double>();
    const auto pose = j.at("pose").get<std::vector<double>>();
    if (pose.size() != 12) io_fail(path, "pose needs 12 numbers");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cam.pose.rotation[static_cast<std::size_t>(3 * r + c)] = pose[static_cast<std::size_t>(4 * r + c)];
      cam.pose.translation[r] = pose[static_cast<std::size_t>(4 * r + 3)];
    }
  } catch (const nlohmann::json::exception& e) {
    io_fail(path, std::string("bad camera JSON: ") + e.what());
  }
  return cam;
}

// Exported poses are usually printed with ~8 significant digits; restore
// exact orthonormality (Gram-Schmidt on the columns) before validating.
void orthonormalize(Pose& pose) {
  auto& r = pose.rotation;
  Vec3 x{r[0], r[3], r[6]};
  Vec3 y{r[1], r[4], r[7]};
  x = normalized(x);
  y = normalized(y - x * dot(x, y));
  const Vec3 z = cross(x, y);
  r = {x.x, y.x, z.x, x.y, y.y, z.y, x.z, y.z, z.z};
}

}  // namespace

Camera read_camera(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open camera file");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto first = text.find_first_not_of(" \t\r\n");
  Camera cam;
  if (first != std::string::npos && text[first] == '{') {
    try {
      cam = camera_from_json(nlohmann::json::parse(text), path);
    } catch (const nlohmann::json::exception& e) {
      io_fail(path, std::string("bad camera JSON: ") + e.what());
    }
  } else {
    std::map<std::string, std::vector<double>> fields;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      std::vector<double> nums;
      double x = 0.0;
      while (ls >> x) nums.push_back(x);
      if (!ls.eof()) io_fail(path, "non-numeric value for '" + key + "'");
      fields[key] = std::move(nums);
    }
    auto scalar = [&](const char* key) {
      const auto it = fields.find(key);
      if (it == fields.end() || it->second.size() != 1) io_fail(path, std::string("missing or malformed '") + key + "'");
      return it->second[0];
    };
    cam.width = static_cast<int>(scalar("width"));
    cam.height = static_cast<int>(scalar("height"));
    cam.focal = scalar("focal");
    cam.t_near = scalar("t_near");
    cam.t_far = scalar("t_far");
    const auto it = fields.find("pose");
    if (it == fields.end() || it->second.size() != 12) io_fail(path, "missing or malformed 'pose' (12 numbers)");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) cam.pose.rotation[static_cast<std::size_t>(3 * r + c)] = it->second[static_cast<std::size_t>(4 * r + c)];
      cam.pose.translation[r] = it->second[static_cast<std::size_t>(4 * r + 3)];
    }
  }
  try {
    validate(cam);
  } catch (const Error& e) {
    io_fail(path, e.what());
  }
  return cam;
}

void write_camera(const std::filesystem::path& path, const Camera& camera) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) io_fail(path, "cannot open for writing");
  out << std::setprecision(17);
  out << "width " << camera.width << "\nheight " << camera.height << "\nfocal " << camera.focal << "\npose";
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) out << ' ' << camera.pose.rotation[static_cast<std::size_t>(3 * r + c)];
    out << ' ' << camera.pose.translation[r];
  }
  out << "\nt_near " << camera.t_near << "\nt_far " << camera.t_far << '\n';
  if (!out) io_fail(path, "write failed");
}

std::vector<TransformsFrame> read_transforms(const std::filesystem::path& path, int width, int height,
                                             double t_near, double t_far) {
  std::ifstream in(path);
  if (!in) io_fail(path, "cannot open transforms file");
  std::vector<TransformsFrame> frames;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    const double fov_x = j.at("camera_angle_x").get<double>();
    if (j.contains("w")) width = j.at("w").get<int>();
    if (j.contains("h")) height = j.at("h").get<int>();
    const double focal = 0.5 * width / std::tan(0.5 * fov_x);
    for (const auto& frame : j.at("frames")) {
      const auto m = frame.at("transform_matrix").get<std::vector<std::vector<double>>>();
      if (m.size() < 3) io_fail(path, "transform_matrix needs at least 3 rows");
      TransformsFrame f;
      f.camera.width = width;
      f.camera.height = height;
      f.camera.focal = focal;
      f.camera.t_near = t_near;
      f.camera.t_far = t_far;
      for (int r = 0; r < 3; ++r) {
        if (m[static_cast<std::size_t>(r)].size() != 4) io_fail(path, "transform_matrix rows need 4 entries");
        for (int c = 0; c < 3; ++c) f.camera.pose.rotation[static_cast<std::size_t>(3 * r + c)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        f.camera.pose.translation[r] = m[static_cast<std::size_t>(r)][3];
      }
      f.file_path = frame.value("file_path", std::string());
      orthonormalize(f.camera.pose);
      validate(f.camera);
      frames.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    io_fail(path, std::string("bad transforms JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::kIo) throw;
    io_fail(path, e.what());
  }
  return frames;
}

}  // namespace wsdf
