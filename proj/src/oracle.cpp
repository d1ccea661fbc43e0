#include "wsdf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <type_traits>

#include "wsdf/error.hpp"

namespace wsdf {

double analytic_sdf(const AnalyticShape& shape, const Vec3& p) {
  validate(shape);
  return std::visit(
      [&p](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          return s.radius - norm(p - s.center);
        } else if constexpr (std::is_same_v<T, Box>) {
          const Vec3 center = (s.min + s.max) * 0.5;
          const Vec3 half = (s.max - s.min) * 0.5;
          const Vec3 q{std::abs(p.x - center.x) - half.x, std::abs(p.y - center.y) - half.y,
                       std::abs(p.z - center.z) - half.z};
          const Vec3 outside{std::max(q.x, 0.0), std::max(q.y, 0.0), std::max(q.z, 0.0)};
          const double inside = std::min(std::max({q.x, q.y, q.z}), 0.0);
          return -(norm(outside) + inside);
        } else {
          return dot(normalized(s.normal), p) - s.offset;
        }
      },
      shape);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_binary(const VoxelGrid& grid) {
  require(grid.is_binary(), "distance transform needs a grid with values in {0, 1}");
}

// 1D squared-distance transform of f (values are finite or +inf) over n
// samples with stride `stride`, in place. v/z are scratch buffers.
void envelope_1d(double* f, std::size_t stride, int n, std::vector<int>& v, std::vector<double>& z,
                 std::vector<double>& out) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[static_cast<std::size_t>(q) * stride];
    if (fq == kInf) continue;
    double s = -kInf;
    while (k >= 0) {
      const int p = v[static_cast<std::size_t>(k)];
      const double fp = f[static_cast<std::size_t>(p) * stride];
      s = ((fq + double(q) * q) - (fp + double(p) * p)) / (2.0 * q - 2.0 * p);
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = k == 0 ? -kInf : s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }
  if (k < 0) return;  // no finite samples: line stays +inf
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
    const int p = v[static_cast<std::size_t>(j)];
    const double d = double(q - p);
    out[static_cast<std::size_t>(q)] = d * d + f[static_cast<std::size_t>(p) * stride];
  }
  for (int q = 0; q < n; ++q) f[static_cast<std::size_t>(q) * stride] = out[static_cast<std::size_t>(q)];
}

// Squared voxel distance from every voxel to the nearest voxel whose value equals `target`.
std::vector<double> squared_edt_to(const VoxelGrid& grid, double target) {
  const GridDims& d = grid.dims();
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = grid[i] == target ? 0.0 : kInf;
  const std::size_t nx = static_cast<std::size_t>(d.nx);
  const std::size_t nxy = nx * static_cast<std::size_t>(d.ny);
  const int longest = std::max({d.nx, d.ny, d.nz});

  for (int axis = 0; axis < 3; ++axis) {
    const int len = d[axis];
    const std::size_t stride = axis == 0 ? 1 : (axis == 1 ? nx : nxy);
    const int a = axis == 0 ? d.ny : d.nx;
    const int b = axis == 2 ? d.ny : d.nz;
#pragma omp parallel
    {
      std::vector<int> v(static_cast<std::size_t>(longest));
      std::vector<double> z(static_cast<std::size_t>(longest) + 1);
      std::vector<double> out(static_cast<std::size_t>(longest));
#pragma omp for schedule(static)
      for (int line = 0; line < a * b; ++line) {
        const int p = line % a;
        const int q = line / a;
        std::size_t start = 0;
        if (axis == 0) start = static_cast<std::size_t>(p) * nx + static_cast<std::size_t>(q) * nxy;
        if (axis == 1) start = static_cast<std::size_t>(p) + static_cast<std::size_t>(q) * nxy;
        if (axis == 2) start = static_cast<std::size_t>(p) + static_cast<std::size_t>(q) * nx;
        envelope_1d(f.data() + start, stride, len, v, z, out);
      }
    }
  }
  return f;
}

double grid_diagonal(const VoxelGrid& grid) {
  const GridDims& d = grid.dims();
  return grid.spacing() * std::sqrt(double(d.nx - 1) * (d.nx - 1) + double(d.ny - 1) * (d.ny - 1) +
                                    double(d.nz - 1) * (d.nz - 1));
}

DistanceTransform saturated_transform(const VoxelGrid& grid) {
  const double sign = grid[0] == 1.0 ? 1.0 : -1.0;
  return {grid.with_values(std::vector<double>(grid.size(), sign * grid_diagonal(grid)), FieldKind::kScalar), true};
}

bool single_class(const VoxelGrid& grid) {
  const auto v = grid.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
}

}  // namespace

DistanceTransform exact_distance_transform(const VoxelGrid& binary) {
  require_binary(binary);
  if (single_class(binary)) return saturated_transform(binary);
  const std::vector<double> to_empty = squared_edt_to(binary, 0.0);
  const std::vector<double> to_occupied = squared_edt_to(binary, 1.0);
  std::vector<double> out(binary.size());
  const double h = binary.spacing();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = binary[i] == 1.0 ? h * std::sqrt(to_empty[i]) : -h * std::sqrt(to_occupied[i]);
  }
  return {binary.with_values(std::move(out), FieldKind::kScalar), false};
}

namespace reference {

DistanceTransform distance_transform_brute_force(const VoxelGrid& binary) {
  require_binary(binary);
  if (single_class(binary)) return saturated_transform(binary);
  const GridDims& d = binary.dims();
  std::vector<double> out(binary.size());
  for (int k = 0; k < d.nz; ++k) {
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        const double cls = binary.at(i, j, k);
        double best = kInf;
        for (int c = 0; c < d.nz; ++c) {
          for (int b = 0; b < d.ny; ++b) {
            for (int a = 0; a < d.nx; ++a) {
              if (binary.at(a, b, c) == cls) continue;
              const double dd = double(a - i) * (a - i) + double(b - j) * (b - j) + double(c - k) * (c - k);
              best = std::min(best, dd);
            }
          }
        }
        out[binary.index(i, j, k)] = (cls == 1.0 ? 1.0 : -1.0) * binary.spacing() * std::sqrt(best);
      }
    }
  }
  return {binary.with_values(std::move(out), FieldKind::kScalar), false};
}

}  // namespace reference

PointCloud sample_sphere_surface(const Sphere& sphere, std::int64_t n, std::uint64_t seed) {
  validate(AnalyticShape{sphere});
  require(n >= 1, "sample count must be >= 1");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(n));
  while (static_cast<std::int64_t>(cloud.points.size()) < n) {
    const Vec3 g{gauss(engine), gauss(engine), gauss(engine)};
    const double len = norm(g);
    if (len < 1e-12) continue;
    cloud.points.push_back(sphere.center + g * (sphere.radius / len));
  }
  cloud.source = "sphere n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  return cloud;
}

}  // namespace wsdf
