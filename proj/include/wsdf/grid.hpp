#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wsdf/shapes.hpp"
#include "wsdf/vec3.hpp"

namespace wsdf {

struct GridDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  constexpr std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nz);
  }
  constexpr int operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
  friend constexpr bool operator==(const GridDims&, const GridDims&) = default;
};

// What the stored scalars mean. Occupancy grids clamp every write to [0, 1].
// The numeric values double as the type tag of the binary grid file.
enum class FieldKind : std::uint32_t {
  kOccupancy = 0,
  kSmoothed = 1,
  kWeakSdf = 2,
  kScalar = 3,
};

const char* to_string(FieldKind kind);

// Scalar field sampled at the centers of a uniform, cubic-voxel lattice.
// Voxel (i, j, k) sits at origin + spacing * (i, j, k); storage is x-fastest.
// Immutable except through set(), which enforces the occupancy clamp.
class VoxelGrid {
 public:
  VoxelGrid(GridDims dims, Vec3 origin, double spacing, FieldKind kind = FieldKind::kOccupancy);
  VoxelGrid(GridDims dims, Vec3 origin, double spacing, FieldKind kind, std::vector<double> values);

  const GridDims& dims() const { return dims_; }
  const Vec3& origin() const { return origin_; }
  double spacing() const { return spacing_; }
  FieldKind kind() const { return kind_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.nx) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.ny) * static_cast<std::size_t>(k));
  }
  double at(int i, int j, int k) const { return values_[index(i, j, k)]; }
  double operator[](std::size_t idx) const { return values_[idx]; }

  void set(std::size_t idx, double value);
  void set(int i, int j, int k, double value) { set(index(i, j, k), value); }

  Vec3 voxel_center(int i, int j, int k) const {
    return {origin_.x + spacing_ * i, origin_.y + spacing_ * j, origin_.z + spacing_ * k};
  }
  Vec3 bbox_min() const;
  Vec3 bbox_max() const;
  bool in_bbox(const Vec3& p) const;

  // Same geometry, different values (validated against the new kind).
  VoxelGrid with_values(std::vector<double> values, FieldKind kind) const;

  bool is_binary() const;
  double min_value() const;
  double max_value() const;

 private:
  GridDims dims_;
  Vec3 origin_;
  double spacing_;
  FieldKind kind_;
  std::vector<double> values_;
};

// The up-to-8 voxels that contribute to a trilinear sample, with their
// weights. Neighbors outside the grid read the fill value 0, so they are
// simply dropped from the stencil.
struct TrilinearStencil {
  std::array<std::size_t, 8> index{};
  std::array<double, 8> weight{};
  int count = 0;
};

// Empty stencil for points outside the bounding box.
inline TrilinearStencil trilinear_stencil(const VoxelGrid& grid, const Vec3& p) {
  TrilinearStencil s;
  const GridDims& d = grid.dims();
  const double inv = 1.0 / grid.spacing();
  const double gx = (p.x - grid.origin().x) * inv;
  const double gy = (p.y - grid.origin().y) * inv;
  const double gz = (p.z - grid.origin().z) * inv;
  if (!(gx >= -0.5 && gx <= d.nx - 0.5 && gy >= -0.5 && gy <= d.ny - 0.5 && gz >= -0.5 && gz <= d.nz - 0.5)) {
    return s;
  }
  const double fx = std::floor(gx);
  const double fy = std::floor(gy);
  const double fz = std::floor(gz);
  const int ix = static_cast<int>(fx);
  const int iy = static_cast<int>(fy);
  const int iz = static_cast<int>(fz);
  const double tx = gx - fx;
  const double ty = gy - fy;
  const double tz = gz - fz;
  for (int c = 0; c < 8; ++c) {
    const int x = ix + (c & 1);
    const int y = iy + ((c >> 1) & 1);
    const int z = iz + ((c >> 2) & 1);
    if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny || z >= d.nz) continue;
    const double w = ((c & 1) ? tx : 1.0 - tx) * (((c >> 1) & 1) ? ty : 1.0 - ty) * (((c >> 2) & 1) ? tz : 1.0 - tz);
    s.index[s.count] = grid.index(x, y, z);
    s.weight[s.count] = w;
    ++s.count;
  }
  return s;
}

// Trilinear interpolation of the 8 surrounding voxels; 0 outside the
// bounding box and for neighbors past the last voxel center.
inline double sample_trilinear(const VoxelGrid& grid, const Vec3& p) {
  const TrilinearStencil s = trilinear_stencil(grid, p);
  double v = 0.0;
  for (int c = 0; c < s.count; ++c) v += s.weight[c] * grid[s.index[c]];
  return v;
}

// Binary occupancy classifier: 1 when the interpolated occupancy is >= 1/2.
inline int hard_classify(const VoxelGrid& grid, const Vec3& p) {
  return sample_trilinear(grid, p) >= 0.5 ? 1 : 0;
}

// Binary occupancy grid: 1 where the voxel center lies inside `shape`.
VoxelGrid make_analytic_grid(const AnalyticShape& shape, GridDims dims, Vec3 origin, double spacing);

// Geometry of a cube [0, extent]^3 split into n^3 voxels.
struct CubeDomain {
  GridDims dims;
  Vec3 origin;
  double spacing;
};
CubeDomain cube_domain(int n, double extent = 1.0);

// Thresholds at 1/2 (ties go to occupied), producing a {0, 1} occupancy grid.
VoxelGrid binarize(const VoxelGrid& grid);

}  // namespace wsdf
