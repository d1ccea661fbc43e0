#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wsdf/camera.hpp"
#include "wsdf/grid.hpp"
#include "wsdf/image.hpp"
#include "wsdf/render.hpp"
#include "wsdf/smoothing.hpp"
#include "wsdf/transfer.hpp"

namespace wsdf {

// The differentiable image-formation chain: occupancy grid -> Gaussian
// smoothing -> sigmoid -> density -> volume rendering with a flat albedo.
struct ForwardModel {
  SmoothingConfig smoothing;
  TransferConfig transfer;
  RenderOptions render;
};

// A posed view with its RGB target image (3 channels, camera dims).
struct View {
  Camera camera;
  Image target;
};

// One pixel of one view.
struct RayRef {
  int view = 0;
  int pixel = 0;
};

struct LossAndGrad {
  double loss = 0.0;              // mean over rays and RGB channels of squared error
  std::vector<double> gradient;   // d loss / d voxel value, one per voxel
};

// L2 loss between rendered and target colors over `batch`, with its exact
// gradient with respect to every voxel value (chain rule through the
// quadrature weights, the density and sigmoid maps, trilinear sampling and
// the smoothing adjoint). Gradient accumulation uses per-thread buffers
// merged in thread order.
LossAndGrad loss_and_grad(const VoxelGrid& grid, std::span<const View> views, std::span<const RayRef> batch,
                          const ForwardModel& model);

// Same, over every pixel of every view.
LossAndGrad loss_and_grad(const VoxelGrid& grid, std::span<const View> views, const ForwardModel& model);

// Loss only (no gradient).
double batch_loss(const VoxelGrid& grid, std::span<const View> views, std::span<const RayRef> batch,
                  const ForwardModel& model);

struct FitConfig {
  int iterations = 500;
  double learning_rate = 1.0;
  int batch_rays = 4096;  // >= total ray count means full-batch descent
  std::uint64_t seed = 0;
  // Backtracking: halve the step until the batch loss does not increase,
  // then grow it by 1.5x for the next iteration.
  bool line_search = true;
};

void validate(const FitConfig& cfg);

struct FitReport {
  std::vector<double> loss_trace;  // batch loss before each step
  std::vector<double> step_sizes;  // accepted step size per iteration (0 if none)
  double best_loss = 0.0;
  double final_psnr = 0.0;  // mean PSNR of the returned grid over the held-out views
  double seconds = 0.0;
};

struct FitResult {
  VoxelGrid grid;
  FitReport report;
};

// Projected gradient descent on the voxel values (clamped to [0, 1] after
// each step). Returns the grid with the lowest observed batch loss. PSNR is
// measured on `held_out` (or on the training views when it is empty).
// Throws Error(kNumeric) if the loss becomes NaN.
FitResult fit(const VoxelGrid& initial, std::span<const View> views, std::span<const View> held_out,
              const ForwardModel& model, const FitConfig& cfg);

// Renders `grid` from `camera` with the forward model.
RenderedImage render_model(const VoxelGrid& grid, const Camera& camera, const ForwardModel& model);

}  // namespace wsdf
