#include "wsdf/grid.hpp"

#include <algorithm>
#include <string>
#include <type_traits>

#include "wsdf/error.hpp"

namespace wsdf {

const char* to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument: return "invalid-argument";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kDomain: return "domain";
    case ErrorCategory::kNumeric: return "numeric";
  }
  return "unknown";
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::kOccupancy: return "occupancy";
    case FieldKind::kSmoothed: return "smoothed";
    case FieldKind::kWeakSdf: return "weak_sdf";
    case FieldKind::kScalar: return "scalar";
  }
  return "unknown";
}

void validate(const AnalyticShape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          require(is_finite(s.center) && std::isfinite(s.radius), "sphere parameters must be finite");
          require(s.radius > 0.0, "sphere radius must be positive");
        } else if constexpr (std::is_same_v<T, Box>) {
          require(is_finite(s.min) && is_finite(s.max), "box corners must be finite");
          require(s.min.x < s.max.x && s.min.y < s.max.y && s.min.z < s.max.z, "box min must be below max on every axis");
        } else {
          require(is_finite(s.normal) && std::isfinite(s.offset), "halfspace parameters must be finite");
          require(norm(s.normal) > 0.0, "halfspace normal must be nonzero");
        }
      },
      shape);
}

bool contains(const AnalyticShape& shape, const Vec3& p) {
  return std::visit(
      [&p](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return squared_norm(p - s.center) <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          return p.x >= s.min.x && p.x <= s.max.x && p.y >= s.min.y && p.y <= s.max.y && p.z >= s.min.z &&
                 p.z <= s.max.z;
        } else {
          return dot(normalized(s.normal), p) >= s.offset;
        }
      },
      shape);
}

namespace {

void check_geometry(const GridDims& dims, const Vec3& origin, double spacing) {
  require(dims.nx >= 2 && dims.ny >= 2 && dims.nz >= 2, "grid dims must be >= 2 on every axis");
  require(std::isfinite(spacing) && spacing > 0.0, "grid spacing must be positive and finite");
  require(is_finite(origin), "grid origin must be finite");
}

}  // namespace

VoxelGrid::VoxelGrid(GridDims dims, Vec3 origin, double spacing, FieldKind kind)
    : dims_(dims), origin_(origin), spacing_(spacing), kind_(kind) {
  check_geometry(dims_, origin_, spacing_);
  values_.assign(dims_.count(), 0.0);
}

VoxelGrid::VoxelGrid(GridDims dims, Vec3 origin, double spacing, FieldKind kind, std::vector<double> values)
    : dims_(dims), origin_(origin), spacing_(spacing), kind_(kind), values_(std::move(values)) {
  check_geometry(dims_, origin_, spacing_);
  require(values_.size() == dims_.count(),
          "value count " + std::to_string(values_.size()) + " does not match dims (" + std::to_string(dims_.count()) +
              ")");
  if (kind_ == FieldKind::kOccupancy) {
    for (double& v : values_) v = std::clamp(v, 0.0, 1.0);
  }
}

void VoxelGrid::set(std::size_t idx, double value) {
  values_[idx] = kind_ == FieldKind::kOccupancy ? std::clamp(value, 0.0, 1.0) : value;
}

Vec3 VoxelGrid::bbox_min() const {
  const double h = 0.5 * spacing_;
  return {origin_.x - h, origin_.y - h, origin_.z - h};
}

Vec3 VoxelGrid::bbox_max() const {
  const double h = 0.5 * spacing_;
  return {origin_.x + spacing_ * (dims_.nx - 1) + h, origin_.y + spacing_ * (dims_.ny - 1) + h,
          origin_.z + spacing_ * (dims_.nz - 1) + h};
}

bool VoxelGrid::in_bbox(const Vec3& p) const {
  const Vec3 lo = bbox_min();
  const Vec3 hi = bbox_max();
  return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
}

VoxelGrid VoxelGrid::with_values(std::vector<double> values, FieldKind kind) const {
  return VoxelGrid(dims_, origin_, spacing_, kind, std::move(values));
}

bool VoxelGrid::is_binary() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

double VoxelGrid::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double VoxelGrid::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

VoxelGrid make_analytic_grid(const AnalyticShape& shape, GridDims dims, Vec3 origin, double spacing) {
  validate(shape);
  VoxelGrid grid(dims, origin, spacing, FieldKind::kOccupancy);
  std::vector<double> values(dims.count());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < dims.nz; ++k) {
    for (int j = 0; j < dims.ny; ++j) {
      for (int i = 0; i < dims.nx; ++i) {
        values[grid.index(i, j, k)] = contains(shape, grid.voxel_center(i, j, k)) ? 1.0 : 0.0;
      }
    }
  }
  return grid.with_values(std::move(values), FieldKind::kOccupancy);
}

CubeDomain cube_domain(int n, double extent) {
  require(n >= 2, "cube domain needs at least 2 voxels per axis");
  require(std::isfinite(extent) && extent > 0.0, "cube extent must be positive");
  const double h = extent / n;
  return {{n, n, n}, {0.5 * h, 0.5 * h, 0.5 * h}, h};
}

VoxelGrid binarize(const VoxelGrid& grid) {
  std::vector<double> values(grid.values().begin(), grid.values().end());
  for (double& v : values) v = v >= 0.5 ? 1.0 : 0.0;
  return grid.with_values(std::move(values), FieldKind::kOccupancy);
}

}  // namespace wsdf
