#pragma once

#include <filesystem>

#include "wsdf/grid.hpp"

namespace wsdf {

// Binary container layout (all little-endian):
//   offset  0  char[4]  magic "CSDF"
//   offset  4  u32      version (1)
//   offset  8  u32[3]   dims nx, ny, nz
//   offset 20  f64[3]   origin (center of voxel 0,0,0)
//   offset 44  f64      spacing
//   offset 52  u32      value type tag (FieldKind)
//   offset 56  u8[8]    reserved, zero
//   offset 64  f32[nx*ny*nz] values, x-fastest
//
// The text variant starts with the line "CSDF-TEXT 1", followed by
// "dims", "origin", "spacing" and "kind" lines, then "values" and the
// whitespace-separated values in the same order.
enum class GridFormat { kBinary, kText };

inline constexpr std::uint32_t kGridFormatVersion = 1;
inline constexpr std::size_t kGridHeaderBytes = 64;

void write_grid(const std::filesystem::path& path, const VoxelGrid& grid, GridFormat format = GridFormat::kBinary);

// Detects the variant from the first bytes.
VoxelGrid read_grid(const std::filesystem::path& path);

}  // namespace wsdf
