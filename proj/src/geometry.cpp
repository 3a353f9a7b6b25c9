#include "eaog/geometry.hpp"

#include <algorithm>

namespace eaog {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace {

double box_point_distance(Vec2 center, double hx, double hy, Vec2 p) {
  const double dx = std::max(std::abs(p.x - center.x) - hx, 0.0);
  const double dy = std::max(std::abs(p.y - center.y) - hy, 0.0);
  return std::hypot(dx, dy);
}

// Liang-Barsky clip of segment ab against the box.
bool segment_hits_box(Vec2 center, double hx, double hy, Vec2 a, Vec2 b) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {a.x - (center.x - hx), (center.x + hx) - a.x, a.y - (center.y - hy),
                       (center.y + hy) - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

double footprint_point_distance(const Footprint& fp, Vec2 center, Vec2 p) {
  if (fp.shape == Footprint::Shape::Circle) {
    return std::max(distance(center, p) - fp.radius, 0.0);
  }
  return box_point_distance(center, fp.hx, fp.hy, p);
}

double footprint_segment_distance(const Footprint& fp, Vec2 center, Vec2 a, Vec2 b) {
  if (fp.shape == Footprint::Shape::Circle) {
    return std::max(point_segment_distance(center, a, b) - fp.radius, 0.0);
  }
  if (segment_hits_box(center, fp.hx, fp.hy, a, b)) return 0.0;
  double best = std::min(box_point_distance(center, fp.hx, fp.hy, a),
                         box_point_distance(center, fp.hx, fp.hy, b));
  const Vec2 corners[4] = {{center.x - fp.hx, center.y - fp.hy},
                           {center.x + fp.hx, center.y - fp.hy},
                           {center.x - fp.hx, center.y + fp.hy},
                           {center.x + fp.hx, center.y + fp.hy}};
  for (const Vec2& c : corners) best = std::min(best, point_segment_distance(c, a, b));
  return best;
}

}  // namespace eaog
