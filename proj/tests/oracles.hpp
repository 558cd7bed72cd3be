#pragma once

// Test-only oracles, independent of the implementation paths they check.

#include <Eigen/Dense>
#include <vector>

#include "fplan/ellipsoid.hpp"
#include "fplan/geometry.hpp"
#include "fplan/obstacle.hpp"
#include "fplan/rng.hpp"

namespace fplan::testing {

// Uniform-ish direction on the unit sphere in R^n.
inline Vec random_direction(Rng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  const double nn = v.norm();
  return nn > 0 ? Vec(v / nn) : random_direction(rng, n);
}

// Points on the boundary of an ellipsoid, via the Cholesky factor of M.
inline Vec boundary_point(const Ellipsoid& e, const Vec& dir) {
  Eigen::LLT<Mat> llt(e.shape());
  const Mat L = llt.matrixL();
  return e.center() + L.transpose().triangularView<Eigen::Upper>().solve(dir);
}

// Brute-force containment: sample n points on the inner boundary, all must
// satisfy the outer form <= 1 + 1e-6.
inline bool oracle_contains(const Ellipsoid& outer, const Ellipsoid& inner, int n, Rng& rng) {
  Eigen::LLT<Mat> llt(inner.shape());
  const Mat L = llt.matrixL();
  for (int i = 0; i < n; ++i) {
    const Vec p = inner.center() +
                  L.transpose().triangularView<Eigen::Upper>().solve(random_direction(rng, inner.dim()));
    if (outer.quadratic_form(p) > 1.0 + 1e-6) return false;
  }
  return true;
}

inline double oracle_max_form(const Ellipsoid& outer, const Ellipsoid& inner, int n, Rng& rng) {
  Eigen::LLT<Mat> llt(inner.shape());
  const Mat L = llt.matrixL();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec p = inner.center() +
                  L.transpose().triangularView<Eigen::Upper>().solve(random_direction(rng, inner.dim()));
    worst = std::max(worst, outer.quadratic_form(p));
  }
  return worst;
}

inline Ellipsoid random_ellipse2d(Rng& rng, double center_span = 3.0, double ax_lo = 0.3,
                                  double ax_hi = 2.0) {
  const double th = rng.uniform(0.0, 2.0 * M_PI);
  const double a = rng.uniform(ax_lo, ax_hi);
  const double b = rng.uniform(ax_lo, ax_hi);
  Mat R(2, 2);
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Mat D = Mat::Zero(2, 2);
  D(0, 0) = 1.0 / (a * a);
  D(1, 1) = 1.0 / (b * b);
  Vec c(2);
  c << rng.uniform(-center_span, center_span), rng.uniform(-center_span, center_span);
  return Ellipsoid(c, R * D * R.transpose());
}

inline Ellipsoid random_ellipsoid(Rng& rng, int n, double center_span = 2.0, double ax_lo = 0.3,
                                  double ax_hi = 2.0) {
  // Random orthonormal frame from a QR factorization of a Gaussian matrix.
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  Mat D = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double a = rng.uniform(ax_lo, ax_hi);
    D(i, i) = 1.0 / (a * a);
  }
  Vec c(n);
  for (int i = 0; i < n; ++i) c(i) = rng.uniform(-center_span, center_span);
  Mat M = Q * D * Q.transpose();
  return Ellipsoid(c, 0.5 * (M + M.transpose()));
}

inline bool point_in_obstacle(const Obstacle& o, double x, double y) {
  return o.contains(Vec2(x, y));
}

inline bool point_in_ellipse(const Ellipsoid& e, double x, double y) {
  Vec p(2);
  p << x, y;
  return e.quadratic_form(p) <= 1.0;
}

// Grid-rasterization overlap oracle on an axis-aligned window.
inline bool grid_overlap_oracle(const Ellipsoid& e, const Obstacle& o, double x0, double y0,
                                double x1, double y1, int cells) {
  const double dx = (x1 - x0) / cells;
  const double dy = (y1 - y0) / cells;
  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      const double x = x0 + (i + 0.5) * dx;
      const double y = y0 + (j + 0.5) * dy;
      if (point_in_ellipse(e, x, y) && point_in_obstacle(o, x, y)) return true;
    }
  }
  return false;
}

}  // namespace fplan::testing
