#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsdf/image.hpp"
#include "wsdf/mesh.hpp"

namespace wsdf {

inline constexpr double kPsnrCap = 99.0;

struct PsnrResult {
  double db = 0.0;
  double mse = 0.0;
  bool capped = false;  // identical images; db is kPsnrCap
};

// 10 log10(1 / MSE) over all pixels and channels, peak value 1.
PsnrResult psnr(const Image& a, const Image& b);

struct PointCloud {
  std::vector<Vec3> points;
  std::string source;  // provenance, e.g. "mesh.ply n=10000 seed=1"
};

// Area-weighted uniform sampling of the mesh surface.
PointCloud sample_mesh(const TriangleMesh& mesh, std::int64_t n, std::uint64_t seed);

// Static 3D k-d tree for exact nearest-neighbor queries.
class KdTree {
 public:
  explicit KdTree(std::vector<Vec3> points);

  double nearest_squared_distance(const Vec3& q) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    int axis = -1;  // -1 for leaves
    double split = 0.0;
    int begin = 0;
    int end = 0;
    int left = -1;
    int right = -1;
  };
  int build(int begin, int end);
  void search(int node, const Vec3& q, double& best) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
};

// Squared distance from each query to its nearest target (OpenMP over queries).
std::vector<double> nearest_squared_distances(const std::vector<Vec3>& queries, const KdTree& targets);

// mean_a min_b |p-q|^2 + mean_b min_a |p-q|^2. With root = true the
// per-point distances are not squared.
double chamfer(const PointCloud& a, const PointCloud& b, bool root = false);

namespace reference {

std::vector<double> nearest_squared_distances_brute_force(const std::vector<Vec3>& queries,
                                                          const std::vector<Vec3>& targets);
double chamfer_brute_force(const PointCloud& a, const PointCloud& b, bool root = false);

}  // namespace reference

}  // namespace wsdf
