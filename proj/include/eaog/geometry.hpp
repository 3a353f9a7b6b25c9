#pragma once

#include <cmath>

namespace eaog {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

inline Vec2 rotate(Vec2 v, double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Axis-aligned box given by center and half extents.
struct Box {
  Vec2 center;
  double hx = 0.0;
  double hy = 0.0;

  bool operator==(const Box&) const = default;
  bool contains(Vec2 p, double eps = 1e-12) const {
    return std::abs(p.x - center.x) <= hx + eps && std::abs(p.y - center.y) <= hy + eps;
  }
};

struct Footprint {
  enum class Shape { Circle, Box };
  Shape shape = Shape::Circle;
  double radius = 0.0;  // Circle
  double hx = 0.0;      // Box half extents
  double hy = 0.0;

  bool operator==(const Footprint&) const = default;
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Distance between a footprint centered at `center` and a point.
double footprint_point_distance(const Footprint& fp, Vec2 center, Vec2 p);

/// Distance between a footprint centered at `center` and segment ab.
double footprint_segment_distance(const Footprint& fp, Vec2 center, Vec2 a, Vec2 b);

}  // namespace eaog
