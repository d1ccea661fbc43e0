#pragma once

#include <limits>
#include <span>
#include <vector>

#include "wsdf/grid.hpp"

namespace wsdf {

// Isotropic Gaussian smoothing scale. sigma is carried in world units so
// that everything derived from it (certified radii, the weak SDF) comes
// out in world units regardless of grid resolution.
struct SmoothingConfig {
  double sigma_world = 1.0;
  double truncation = 4.0;  // kernel half-width in multiples of sigma

  static SmoothingConfig from_voxels(double sigma_voxels, double spacing, double truncation = 4.0) {
    return {sigma_voxels * spacing, truncation};
  }
  double sigma_voxels(double spacing) const { return sigma_world / spacing; }
};

// sigma_world > 0 and finite, truncation >= 2.
void validate(const SmoothingConfig& cfg);

struct SmoothedGrid {
  VoxelGrid grid;  // FieldKind::kSmoothed, values in [0, 1]
  SmoothingConfig config;
  // The input held only {0, 1}. Certified-radius semantics apply only then;
  // for soft inputs the convolution is E[f(x + eps)], not P(hard class).
  bool source_binary = false;
};

// Normalized samples of the Gaussian density at the integer offsets
// |i| <= truncation * sigma_voxels. The result has odd length and is
// symmetric; when the window does not reach offset 1 it is the delta [1].
// Throws if the kernel would be longer than `axis_length`.
std::vector<double> gaussian_kernel_1d(double sigma_voxels, double truncation,
                                       int axis_length = std::numeric_limits<int>::max());

// Separable convolution with zero fill outside the grid, applied along x,
// then y, then z. OpenMP-parallel over scanlines/slices; the summation
// order does not depend on the thread count.
std::vector<double> convolve_separable(std::span<const double> values, GridDims dims, std::span<const double> kernel);

// The smoothed field f_hat = f * N(0, sigma^2 I) sampled on the grid.
SmoothedGrid smooth(const VoxelGrid& grid, const SmoothingConfig& cfg);

// Adjoint of smooth() with respect to the voxel values (ignoring the
// rounding clamp): a convolution with the same symmetric kernel.
std::vector<double> smooth_adjoint(std::span<const double> upstream, const VoxelGrid& geometry,
                                   const SmoothingConfig& cfg);

// Serial references, for tests and benchmarks.
namespace reference {

// Per-voxel gather along each axis, no OpenMP.
std::vector<double> convolve_separable_serial(std::span<const double> values, GridDims dims,
                                              std::span<const double> kernel);

}  // namespace reference

// Brute-force 3D convolution with the full (2R+1)^3 product kernel. Same
// contract as smooth(); O(N * R^3).
SmoothedGrid smooth_direct_reference(const VoxelGrid& grid, const SmoothingConfig& cfg);

}  // namespace wsdf
