#include "wsdf/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "mc_tables.hpp"
#include "wsdf/error.hpp"

namespace wsdf {

void validate(const TriangleMesh& mesh) {
  const auto n = static_cast<long long>(mesh.vertices.size());
  for (const Vec3& v : mesh.vertices) require(is_finite(v), "mesh vertex is not finite");
  for (const auto& t : mesh.triangles) {
    for (int i : t) require(i >= 0 && i < n, "triangle index out of range");
    require(t[0] != t[1] && t[1] != t[2] && t[0] != t[2], "degenerate triangle repeats a vertex index");
  }
}

namespace {

constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
constexpr int kEdgeCorners[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
                                     {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Lattice edge id: 3 * (voxel index of the lower endpoint) + axis.
using EdgeKey = std::uint64_t;

EdgeKey edge_key(const VoxelGrid& g, int i, int j, int k, int edge) {
  const int* a = kCorner[kEdgeCorners[edge][0]];
  const int* b = kCorner[kEdgeCorners[edge][1]];
  int base[3];
  int axis = 0;
  for (int d = 0; d < 3; ++d) {
    base[d] = std::min(a[d], b[d]);
    if (a[d] != b[d]) axis = d;
  }
  return 3 * static_cast<EdgeKey>(g.index(i + base[0], j + base[1], k + base[2])) + static_cast<EdgeKey>(axis);
}

// Interpolates along the edge in its canonical direction so every cell
// sharing it produces the same point.
Vec3 edge_vertex(const VoxelGrid& g, EdgeKey key, double iso) {
  const auto axis = static_cast<int>(key % 3);
  const std::size_t idx = static_cast<std::size_t>(key / 3);
  const std::size_t nx = static_cast<std::size_t>(g.dims().nx);
  const std::size_t ny = static_cast<std::size_t>(g.dims().ny);
  const int i = static_cast<int>(idx % nx);
  const int j = static_cast<int>((idx / nx) % ny);
  const int k = static_cast<int>(idx / (nx * ny));
  int o[3] = {0, 0, 0};
  o[axis] = 1;
  const double v0 = g.at(i, j, k);
  const double v1 = g.at(i + o[0], j + o[1], k + o[2]);
  const double t = v1 != v0 ? std::clamp((iso - v0) / (v1 - v0), 0.0, 1.0) : 0.5;
  Vec3 p = g.voxel_center(i, j, k);
  p[axis] += t * g.spacing();
  return p;
}

}  // namespace

TriangleMesh marching_cubes(const VoxelGrid& field, double isovalue) {
  require(std::isfinite(isovalue), "isovalue must be finite");
  const GridDims& d = field.dims();
  const int slabs = d.nz - 1;
  std::vector<std::vector<std::array<EdgeKey, 3>>> per_slab(static_cast<std::size_t>(slabs));

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < slabs; ++k) {
    auto& tris = per_slab[static_cast<std::size_t>(k)];
    for (int j = 0; j < d.ny - 1; ++j) {
      for (int i = 0; i < d.nx - 1; ++i) {
        int cube = 0;
        for (int c = 0; c < 8; ++c) {
          if (field.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]) < isovalue) cube |= 1 << c;
        }
        if (detail::kEdgeTable[static_cast<std::size_t>(cube)] == 0) continue;
        const auto& row = detail::kTriTable[static_cast<std::size_t>(cube)];
        for (int t = 0; row[static_cast<std::size_t>(t)] != -1; t += 3) {
          tris.push_back({edge_key(field, i, j, k, row[static_cast<std::size_t>(t)]),
                          edge_key(field, i, j, k, row[static_cast<std::size_t>(t + 1)]),
                          edge_key(field, i, j, k, row[static_cast<std::size_t>(t + 2)])});
        }
      }
    }
  }

  TriangleMesh mesh;
  std::unordered_map<EdgeKey, int> ids;
  for (const auto& tris : per_slab) {
    for (const auto& keys : tris) {
      std::array<int, 3> tri{};
      for (int c = 0; c < 3; ++c) {
        const auto [it, inserted] = ids.try_emplace(keys[static_cast<std::size_t>(c)], static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(edge_vertex(field, keys[static_cast<std::size_t>(c)], isovalue));
        tri[static_cast<std::size_t>(c)] = it->second;
      }
      mesh.triangles.push_back(tri);
    }
  }
  return mesh;
}

MeshTopology analyze_topology(const TriangleMesh& mesh) {
  MeshTopology topo;
  topo.faces = mesh.triangles.size();
  std::unordered_map<std::uint64_t, int> edge_uses;
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const auto& t : mesh.triangles) {
    for (int c = 0; c < 3; ++c) {
      const auto a = static_cast<std::uint64_t>(t[static_cast<std::size_t>(c)]);
      const auto b = static_cast<std::uint64_t>(t[static_cast<std::size_t>((c + 1) % 3)]);
      used[a] = true;
      ++edge_uses[(std::min(a, b) << 32) | std::max(a, b)];
    }
  }
  for (bool u : used) topo.vertices += u ? 1 : 0;
  topo.edges = edge_uses.size();
  for (const auto& [key, uses] : edge_uses) {
    if (uses == 1) ++topo.boundary_edges;
    if (uses > 2) ++topo.nonmanifold_edges;
  }
  return topo;
}

double triangle_area(const TriangleMesh& mesh, std::size_t triangle) {
  const auto& t = mesh.triangles[triangle];
  const Vec3& a = mesh.vertices[static_cast<std::size_t>(t[0])];
  const Vec3& b = mesh.vertices[static_cast<std::size_t>(t[1])];
  const Vec3& c = mesh.vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * norm(cross(b - a, c - a));
}

}  // namespace wsdf
