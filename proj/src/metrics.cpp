#include "wsdf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "wsdf/error.hpp"

namespace wsdf {

PsnrResult psnr(const Image& a, const Image& b) {
  require(a.width == b.width && a.height == b.height && a.channels == b.channels,
          "psnr: image dimensions differ (" + std::to_string(a.width) + "x" + std::to_string(a.height) + "x" +
              std::to_string(a.channels) + " vs " + std::to_string(b.width) + "x" + std::to_string(b.height) + "x" +
              std::to_string(b.channels) + ")");
  require(!a.data.empty(), "psnr: empty images");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  PsnrResult r;
  r.mse = sum / static_cast<double>(a.data.size());
  if (r.mse == 0.0) {
    r.db = kPsnrCap;
    r.capped = true;
  } else {
    r.db = std::min(kPsnrCap, -10.0 * std::log10(r.mse));
  }
  return r;
}

PointCloud sample_mesh(const TriangleMesh& mesh, std::int64_t n, std::uint64_t seed) {
  require(!mesh.empty(), "cannot sample an empty mesh");
  require(n >= 1, "sample count must be >= 1");
  validate(mesh);
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += triangle_area(mesh, t);
    cumulative[t] = total;
  }
  require(total > 0.0, "mesh has zero surface area");

  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(n));
  for (std::int64_t s = 0; s < n; ++s) {
    const double pick = unit(engine) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
    const auto& tri = mesh.triangles[t];
    const double r1 = std::sqrt(unit(engine));
    const double r2 = unit(engine);
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    cloud.points.push_back(a * (1.0 - r1) + b * (r1 * (1.0 - r2)) + c * (r1 * r2));
  }
  cloud.source = "mesh n=" + std::to_string(n) + " seed=" + std::to_string(seed);
  return cloud;
}

KdTree::KdTree(std::vector<Vec3> points) : points_(std::move(points)) {
  require(!points_.empty(), "k-d tree needs at least one point");
  nodes_.reserve(2 * points_.size() / 8 + 1);
  build(0, static_cast<int>(points_.size()));
}

int KdTree::build(int begin, int end) {
  constexpr int kLeafSize = 8;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({-1, 0.0, begin, end, -1, -1});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[static_cast<std::size_t>(begin)];
  Vec3 hi = lo;
  for (int i = begin; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], points_[static_cast<std::size_t>(i)][a]);
      hi[a] = std::max(hi[a], points_[static_cast<std::size_t>(i)][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  const int mid = begin + (end - begin) / 2;
  std::nth_element(points_.begin() + begin, points_.begin() + mid, points_.begin() + end,
                   [axis](const Vec3& p, const Vec3& q) { return p[axis] < q[axis]; });
  const double split = points_[static_cast<std::size_t>(mid)][axis];
  const int left = build(begin, mid);
  const int right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void KdTree::search(int node_id, const Vec3& q, double& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) best = std::min(best, squared_norm(points_[static_cast<std::size_t>(i)] - q));
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = q[node.axis] - node.split;
  const int near = diff <= 0.0 ? node.left : node.right;
  const int far = diff <= 0.0 ? node.right : node.left;
  search(near, q, best);
  if (diff * diff <= best) search(far, q, best);
}

double KdTree::nearest_squared_distance(const Vec3& q) const {
  double best = std::numeric_limits<double>::infinity();
  search(0, q, best);
  return best;
}

std::vector<double> nearest_squared_distances(const std::vector<Vec3>& queries, const KdTree& targets) {
  std::vector<double> out(queries.size());
  const auto n = static_cast<std::int64_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = targets.nearest_squared_distance(queries[static_cast<std::size_t>(i)]);
  }
  return out;
}

namespace {

double mean_distance(const std::vector<double>& squared, bool root) {
  double sum = 0.0;
  for (double d : squared) sum += root ? std::sqrt(d) : d;
  return sum / static_cast<double>(squared.size());
}

void check_clouds(const PointCloud& a, const PointCloud& b) {
  require(!a.points.empty() && !b.points.empty(), "chamfer distance needs two nonempty point clouds");
}

}  // namespace

double chamfer(const PointCloud& a, const PointCloud& b, bool root) {
  check_clouds(a, b);
  const KdTree tree_a(a.points);
  const KdTree tree_b(b.points);
  return mean_distance(nearest_squared_distances(a.points, tree_b), root) +
         mean_distance(nearest_squared_distances(b.points, tree_a), root);
}

namespace reference {

std::vector<double> nearest_squared_distances_brute_force(const std::vector<Vec3>& queries,
                                                          const std::vector<Vec3>& targets) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (const Vec3& q : queries) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& p : targets) best = std::min(best, squared_norm(p - q));
    out.push_back(best);
  }
  return out;
}

double chamfer_brute_force(const PointCloud& a, const PointCloud& b, bool root) {
  check_clouds(a, b);
  return mean_distance(nearest_squared_distances_brute_force(a.points, b.points), root) +
         mean_distance(nearest_squared_distances_brute_force(b.points, a.points), root);
}

}  // namespace reference

}  // namespace wsdf
