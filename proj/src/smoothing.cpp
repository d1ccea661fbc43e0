#include "wsdf/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsdf/error.hpp"

namespace wsdf {

void validate(const SmoothingConfig& cfg) {
  require(std::isfinite(cfg.sigma_world) && cfg.sigma_world > 0.0, "sigma must be positive and finite");
  require(std::isfinite(cfg.truncation) && cfg.truncation >= 2.0, "kernel truncation must be >= 2 sigma");
}

std::vector<double> gaussian_kernel_1d(double sigma_voxels, double truncation, int axis_length) {
  require(std::isfinite(sigma_voxels) && sigma_voxels > 0.0, "sigma (voxels) must be positive");
  require(std::isfinite(truncation) && truncation > 0.0, "truncation must be positive");
  const double reach = truncation * sigma_voxels;
  require(reach < 1e6, "kernel radius is unreasonably large");
  const int radius = static_cast<int>(std::floor(reach));
  const long long length = 2LL * radius + 1;
  if (length > axis_length) {
    fail(ErrorCategory::kInvalidArgument,
         "Gaussian kernel of length " + std::to_string(length) + " exceeds grid axis of " +
             std::to_string(axis_length) + " voxels; lower sigma or raise the grid resolution");
  }
  std::vector<double> w(static_cast<std::size_t>(length));
  const double inv_two_var = 1.0 / (2.0 * sigma_voxels * sigma_voxels);
  for (int i = -radius; i <= radius; ++i) w[static_cast<std::size_t>(i + radius)] = std::exp(-i * i * inv_two_var);
  // Sum symmetrically from the tails inward so the total is order-stable.
  double total = w[static_cast<std::size_t>(radius)];
  for (int i = radius; i >= 1; --i) {
    total += w[static_cast<std::size_t>(radius - i)] + w[static_cast<std::size_t>(radius + i)];
  }
  for (double& v : w) v /= total;
  return w;
}

namespace {

void check_kernel(std::span<const double> kernel) {
  require(kernel.size() % 2 == 1, "kernel length must be odd");
}

// out[i] = sum_t w[t] * in[i + t - R] along x for every (y, z) line.
void pass_x(const double* in, double* out, GridDims d, std::span<const double> w) {
  const int r = static_cast<int>(w.size() / 2);
  const int lines = d.ny * d.nz;
#pragma omp parallel for schedule(static)
  for (int line = 0; line < lines; ++line) {
    const double* src = in + static_cast<std::size_t>(line) * d.nx;
    double* dst = out + static_cast<std::size_t>(line) * d.nx;
    for (int i = 0; i < d.nx; ++i) {
      const int lo = std::max(-r, -i);
      const int hi = std::min(r, d.nx - 1 - i);
      double acc = 0.0;
      for (int t = lo; t <= hi; ++t) acc += w[static_cast<std::size_t>(t + r)] * src[i + t];
      dst[i] = acc;
    }
  }
}

// Along y: each (z) slice accumulates whole x-rows so the inner loop is contiguous.
void pass_y(const double* in, double* out, GridDims d, std::span<const double> w) {
  const int r = static_cast<int>(w.size() / 2);
  const std::size_t nx = static_cast<std::size_t>(d.nx);
  const std::size_t slice = nx * static_cast<std::size_t>(d.ny);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < d.nz; ++k) {
    for (int j = 0; j < d.ny; ++j) {
      double* dst = out + k * slice + j * nx;
      std::fill(dst, dst + nx, 0.0);
      const int lo = std::max(-r, -j);
      const int hi = std::min(r, d.ny - 1 - j);
      for (int t = lo; t <= hi; ++t) {
        const double wt = w[static_cast<std::size_t>(t + r)];
        const double* src = in + k * slice + (j + t) * nx;
        for (std::size_t i = 0; i < nx; ++i) dst[i] += wt * src[i];
      }
    }
  }
}

void pass_z(const double* in, double* out, GridDims d, std::span<const double> w) {
  const int r = static_cast<int>(w.size() / 2);
  const std::size_t slice = static_cast<std::size_t>(d.nx) * static_cast<std::size_t>(d.ny);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < d.nz; ++k) {
    double* dst = out + k * slice;
    std::fill(dst, dst + slice, 0.0);
    const int lo = std::max(-r, -k);
    const int hi = std::min(r, d.nz - 1 - k);
    for (int t = lo; t <= hi; ++t) {
      const double wt = w[static_cast<std::size_t>(t + r)];
      const double* src = in + (k + t) * slice;
      for (std::size_t i = 0; i < slice; ++i) dst[i] += wt * src[i];
    }
  }
}

void clamp_unit(std::vector<double>& v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
}

std::vector<double> kernel_for(const VoxelGrid& grid, const SmoothingConfig& cfg) {
  validate(cfg);
  const GridDims& d = grid.dims();
  const int shortest = std::min({d.nx, d.ny, d.nz});
  return gaussian_kernel_1d(cfg.sigma_voxels(grid.spacing()), cfg.truncation, shortest);
}

void require_occupancy(const VoxelGrid& grid) {
  require(grid.kind() == FieldKind::kOccupancy, std::string("smoothing expects an occupancy grid, got ") +
                                                    to_string(grid.kind()));
}

}  // namespace

std::vector<double> convolve_separable(std::span<const double> values, GridDims dims, std::span<const double> kernel) {
  check_kernel(kernel);
  require(values.size() == dims.count(), "value count does not match dims");
  std::vector<double> a(values.size());
  std::vector<double> b(values.size());
  pass_x(values.data(), a.data(), dims, kernel);
  pass_y(a.data(), b.data(), dims, kernel);
  pass_z(b.data(), a.data(), dims, kernel);
  return a;
}

SmoothedGrid smooth(const VoxelGrid& grid, const SmoothingConfig& cfg) {
  require_occupancy(grid);
  const std::vector<double> kernel = kernel_for(grid, cfg);
  std::vector<double> out = convolve_separable(grid.values(), grid.dims(), kernel);
  clamp_unit(out);
  return {grid.with_values(std::move(out), FieldKind::kSmoothed), cfg, grid.is_binary()};
}

std::vector<double> smooth_adjoint(std::span<const double> upstream, const VoxelGrid& geometry,
                                   const SmoothingConfig& cfg) {
  const std::vector<double> kernel = kernel_for(geometry, cfg);
  return convolve_separable(upstream, geometry.dims(), kernel);
}

namespace reference {

std::vector<double> convolve_separable_serial(std::span<const double> values, GridDims dims,
                                              std::span<const double> kernel) {
  check_kernel(kernel);
  require(values.size() == dims.count(), "value count does not match dims");
  const int r = static_cast<int>(kernel.size() / 2);
  std::vector<double> cur(values.begin(), values.end());
  std::vector<double> next(values.size());
  auto idx = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims.nx) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims.ny) * k);
  };
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < dims.nz; ++k) {
      for (int j = 0; j < dims.ny; ++j) {
        for (int i = 0; i < dims.nx; ++i) {
          double acc = 0.0;
          for (int t = -r; t <= r; ++t) {
            int p[3] = {i, j, k};
            p[axis] += t;
            if (p[axis] < 0 || p[axis] >= dims[axis]) continue;
            acc += kernel[static_cast<std::size_t>(t + r)] * cur[idx(p[0], p[1], p[2])];
          }
          next[idx(i, j, k)] = acc;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

}  // namespace reference

SmoothedGrid smooth_direct_reference(const VoxelGrid& grid, const SmoothingConfig& cfg) {
  require_occupancy(grid);
  const std::vector<double> w = kernel_for(grid, cfg);
  const int r = static_cast<int>(w.size() / 2);
  const GridDims& d = grid.dims();
  std::vector<double> out(d.count(), 0.0);
  for (int k = 0; k < d.nz; ++k) {
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        double acc = 0.0;
        for (int c = -r; c <= r; ++c) {
          if (k + c < 0 || k + c >= d.nz) continue;
          for (int b = -r; b <= r; ++b) {
            if (j + b < 0 || j + b >= d.ny) continue;
            for (int a = -r; a <= r; ++a) {
              if (i + a < 0 || i + a >= d.nx) continue;
              acc += w[static_cast<std::size_t>(a + r)] * w[static_cast<std::size_t>(b + r)] *
                     w[static_cast<std::size_t>(c + r)] * grid.at(i + a, j + b, k + c);
            }
          }
        }
        out[grid.index(i, j, k)] = acc;
      }
    }
  }
  clamp_unit(out);
  return {grid.with_values(std::move(out), FieldKind::kSmoothed), cfg, grid.is_binary()};
}

}  // namespace wsdf
