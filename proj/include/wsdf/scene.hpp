#pragma once

#include <filesystem>
#include <vector>

#include "wsdf/fit.hpp"

namespace wsdf {

// Posed target images for fitting.
struct Scene {
  std::vector<View> train;
  std::vector<View> held_out;
};

// Orbit layout of a synthetic scene around the cube [0, extent]^3: the
// training ring plus a held-out ring rotated between training azimuths.
struct SceneLayout {
  int views = 8;
  int held_out = 1;
  int image_size = 32;
  double extent = 1.0;
};

void validate(const SceneLayout& layout);

std::vector<Camera> training_cameras(const SceneLayout& layout);
std::vector<Camera> held_out_cameras(const SceneLayout& layout);

// Renders `ground_truth` through the forward model from every camera of
// `layout`.
Scene render_scene(const VoxelGrid& ground_truth, const SceneLayout& layout, const ForwardModel& model);

// Directory layout: cam_NNN.txt + img_NNN.ppm per training view and
// holdout_NNN.txt + holdout_NNN.ppm per held-out view. Returns the files
// written, in order.
std::vector<std::filesystem::path> write_scene(const std::filesystem::path& dir, const Scene& scene);

// Reads the layout above, or transforms_train.json / transforms_test.json
// (image paths relative to the directory, ray bounds from the arguments).
Scene read_scene(const std::filesystem::path& dir, double t_near = 0.0, double t_far = 6.0);

}  // namespace wsdf
