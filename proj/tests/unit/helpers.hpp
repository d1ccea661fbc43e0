#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "wsdf/grid.hpp"

namespace wsdf::testing {

inline VoxelGrid random_grid(GridDims dims, std::uint64_t seed, bool binary = false, double spacing = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(dims.count());
  for (double& x : v) x = binary ? (u(rng) < 0.5 ? 0.0 : 1.0) : u(rng);
  return VoxelGrid(dims, {0.0, 0.0, 0.0}, spacing, FieldKind::kOccupancy, std::move(v));
}

inline VoxelGrid constant_grid(GridDims dims, double value, double spacing = 1.0, Vec3 origin = {}) {
  return VoxelGrid(dims, origin, spacing, FieldKind::kOccupancy, std::vector<double>(dims.count(), value));
}

// Fresh scratch directory under the test's working directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::current_path() / ("scratch_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wsdf::testing
