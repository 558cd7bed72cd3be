#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace fplan {

using Vec2 = Eigen::Vector2d;

// Workspace obstacle: a circle or an axis-aligned rectangle.
struct Obstacle {
  enum class Kind { Circle, Rect };

  Kind kind = Kind::Circle;
  int id = -1;
  Vec2 center = Vec2::Zero();  // circle
  double radius = 0.0;         // circle
  Vec2 lo = Vec2::Zero();      // rect min-corner
  Vec2 hi = Vec2::Zero();      // rect max-corner

  static Obstacle circle(int id, const Vec2& c, double r) {
    if (r <= 0.0) throw std::invalid_argument("obstacle: radius must be positive");
    Obstacle o;
    o.kind = Kind::Circle;
    o.id = id;
    o.center = c;
    o.radius = r;
    return o;
  }

  static Obstacle rect(int id, const Vec2& lo, const Vec2& hi) {
    if (!(lo.x() < hi.x() && lo.y() < hi.y())) {
      throw std::invalid_argument("obstacle: rect corners must satisfy lo < hi");
    }
    Obstacle o;
    o.kind = Kind::Rect;
    o.id = id;
    o.lo = lo;
    o.hi = hi;
    return o;
  }

  // Center and radius of the bounding circle, for first-pass rejection.
  Vec2 bounding_center() const {
    return kind == Kind::Circle ? center : Vec2(0.5 * (lo + hi));
  }
  double bounding_radius() const {
    return kind == Kind::Circle ? radius : 0.5 * (hi - lo).norm();
  }

  bool contains(const Vec2& p) const {
    if (kind == Kind::Circle) return (p - center).squaredNorm() <= radius * radius;
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

}  // namespace fplan
