#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "wsdf/grid.hpp"

namespace wsdf {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  bool empty() const { return triangles.empty(); }
};

// Indices in range, no triangle repeating an index, finite vertices.
void validate(const TriangleMesh& mesh);

// Marching cubes over the voxel-center lattice with linear interpolation
// along cell edges. Vertices are welded per lattice edge, so neighboring
// cells share them. Triangles are wound so their normals point from the
// region where field > isovalue towards field < isovalue (outwards under
// the positive-inside SDF convention). Output order follows the cell
// index, independent of the thread count.
TriangleMesh marching_cubes(const VoxelGrid& field, double isovalue);

// Default extraction level, in voxel units: -0.1 voxels
// lies just outside the certified surface under positive-inside signs.
inline constexpr double kDefaultIsovalueVoxels = -0.1;

struct MeshTopology {
  std::size_t vertices = 0;  // referenced by at least one triangle
  std::size_t edges = 0;
  std::size_t faces = 0;
  std::size_t boundary_edges = 0;     // used by one triangle
  std::size_t nonmanifold_edges = 0;  // used by more than two
  long long euler_characteristic() const {
    return static_cast<long long>(vertices) - static_cast<long long>(edges) + static_cast<long long>(faces);
  }
  bool closed_manifold() const { return boundary_edges == 0 && nonmanifold_edges == 0 && faces > 0; }
};

MeshTopology analyze_topology(const TriangleMesh& mesh);

double triangle_area(const TriangleMesh& mesh, std::size_t triangle);

enum class MeshFormat { kObj, kPly };

// OBJ: ASCII "v"/"f" lines with 1-based indices; coordinates printed with
// enough digits to round-trip float32. PLY: binary little-endian with float
// vertices and uchar/int face lists.
void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh, MeshFormat format);
// Picks the format from the extension (.obj / .ply).
void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);
TriangleMesh read_mesh(const std::filesystem::path& path);

MeshFormat mesh_format_from_name(const std::string& name);

}  // namespace wsdf
