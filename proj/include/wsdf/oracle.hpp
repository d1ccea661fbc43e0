#pragma once

#include <cstdint>

#include "wsdf/grid.hpp"
#include "wsdf/metrics.hpp"
#include "wsdf/shapes.hpp"

namespace wsdf {

// Exact signed distance to the shape's surface, positive inside.
double analytic_sdf(const AnalyticShape& shape, const Vec3& p);

struct DistanceTransform {
  // FieldKind::kScalar, world units: +distance to the nearest empty voxel
  // center for occupied voxels, -distance to the nearest occupied voxel
  // center for empty ones.
  VoxelGrid distances;
  // The grid holds a single class; every value is then +/- the grid diagonal.
  bool saturated = false;
};

// Exact Euclidean distance transform via per-axis lower envelopes of
// parabolas (Felzenszwalb-Huttenlocher). Requires values in {0, 1}.
DistanceTransform exact_distance_transform(const VoxelGrid& binary);

namespace reference {

// O(N^2) brute force over all voxel pairs; same output contract.
DistanceTransform distance_transform_brute_force(const VoxelGrid& binary);

}  // namespace reference

// Uniform samples on the sphere surface.
PointCloud sample_sphere_surface(const Sphere& sphere, std::int64_t n, std::uint64_t seed);

}  // namespace wsdf
