#pragma once

#include <variant>

#include "wsdf/vec3.hpp"

namespace wsdf {

struct Sphere {
  Vec3 center;
  double radius = 1.0;
};

// Axis-aligned box [min, max].
struct Box {
  Vec3 min;
  Vec3 max;
};

// Occupied side is {p : dot(normal, p) >= offset}.
struct Halfspace {
  Vec3 normal{0.0, 0.0, 1.0};
  double offset = 0.0;
};

using AnalyticShape = std::variant<Sphere, Box, Halfspace>;

// Throws Error(kInvalidArgument) for non-finite parameters, radius <= 0,
// an empty box, or a zero normal.
void validate(const AnalyticShape& shape);

bool contains(const AnalyticShape& shape, const Vec3& p);

}  // namespace wsdf
