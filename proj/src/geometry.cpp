#include "fplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fplan {

Ellipsoid project(const Ellipsoid& e, const Mat& basis) {
  const int n = e.dim();
  const int d = static_cast<int>(basis.cols());
  if (basis.rows() != n || d >= n || d < 1) {
    throw std::invalid_argument("project: basis must be n x d with d < n");
  }
  if ((basis.transpose() * basis - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("project: basis columns must be orthonormal");
  }
  Eigen::LDLT<Mat> ldlt(e.shape());
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("project: shape matrix decomposition failed");
  }
  const Mat Minv_B = ldlt.solve(basis);
  const Mat S_inv = basis.transpose() * Minv_B;  // B^T M^-1 B
  Eigen::LDLT<Mat> ldlt2(S_inv);
  if (ldlt2.info() != Eigen::Success) {
    throw NumericalError("project: projected shape is singular");
  }
  const Mat S = ldlt2.solve(Mat::Identity(d, d));
  return Ellipsoid(basis.transpose() * e.center(), 0.5 * (S + S.transpose()));
}

std::vector<Vec> extreme_points(const Ellipsoid& e, int k_per_axis) {
  if (k_per_axis < 2) throw std::invalid_argument("extreme_points: k_per_axis must be >= 2");
  const int n = e.dim();
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    const Vec axis = e.semi_axis(i) * e.eigenvectors().col(i);
    pts.push_back(e.center() + axis);
    pts.push_back(e.center() - axis);
  }
  if (k_per_axis > 2) {
    // Uniform sweeps in consecutive eigen-planes; offset so axis points are
    // not duplicated.
    const int per_plane = n * (k_per_axis - 2) / std::max(1, n - 1);
    for (int pl = 0; pl + 1 < std::max(2, n); ++pl) {
      const int i = pl % n;
      const int j = (pl + 1) % n;
      for (int s = 0; s < per_plane; ++s) {
        const double th = 2.0 * M_PI * (s + 0.5) / per_plane;
        Vec p = e.center();
        p += e.semi_axis(i) * std::cos(th) * e.eigenvectors().col(i);
        p += e.semi_axis(j) * std::sin(th) * e.eigenvectors().col(j);
        pts.push_back(p);
      }
    }
  }
  return pts;
}

double max_form_over_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner) {
  if (outer.dim() != inner.dim()) {
    throw std::invalid_argument("containment: dimension mismatch");
  }
  const int n = outer.dim();

  // Map the inner ellipsoid to the unit ball: x = c_i + L^-T y, M_i = L L^T.
  Eigen::LLT<Mat> llt(inner.shape());
  if (llt.info() != Eigen::Success) {
    throw NumericalError("containment: inner shape Cholesky failed");
  }
  const Mat L = llt.matrixL();
  const Mat Linv = L.triangularView<Eigen::Lower>().solve(Mat::Identity(n, n));
  const Mat A = Linv * outer.shape() * Linv.transpose();  // SPD
  const Vec d = inner.center() - outer.center();
  const Vec b = Linv * (outer.shape() * d);
  const double f0 = d.dot(outer.shape() * d);

  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.transpose()));
  if (es.info() != Eigen::Success) {
    throw NumericalError("containment: eigendecomposition failed");
  }
  const Vec alpha = es.eigenvalues();  // ascending
  const Vec beta = es.eigenvectors().transpose() * b;
  const double a_max = alpha(n - 1);

  if (beta.norm() < 1e-14 * std::max(1.0, a_max)) {
    return f0 + a_max;  // concentric after mapping
  }

  // Maximize y^T A y + 2 b^T y + f0 over ||y|| <= 1. KKT: (lambda I - A) y = b
  // with lambda >= a_max; phi(lambda) = sum beta_j^2/(lambda - alpha_j)^2 is
  // decreasing, and the global max corresponds to phi(lambda) = 1.
  const auto phi = [&](double lam) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double dj = lam - alpha(j);
      s += beta(j) * beta(j) / (dj * dj);
    }
    return s;
  };
  const auto value_at = [&](double lam) {
    double bty = 0.0;
    for (int j = 0; j < n; ++j) {
      const double dj = lam - alpha(j);
      if (std::abs(dj) > 0.0) bty += beta(j) * beta(j) / dj;
    }
    return lam + bty + f0;
  };

  const double scale = std::max(1.0, a_max);
  double lo = a_max + 1e-15 * scale;
  double hi = a_max + beta.norm();
  if (phi(lo) <= 1.0) {
    // Hard case: b is (nearly) orthogonal to the top eigenspace and the
    // remaining components fit inside the sphere. The maximizer pads the top
    // eigen-direction; the value reduces to lambda = a_max.
    double bty = 0.0;
    for (int j = 0; j < n; ++j) {
      const double dj = a_max - alpha(j);
      if (dj > 1e-13 * scale) bty += beta(j) * beta(j) / dj;
    }
    return a_max + bty + f0;
  }

  int it = 0;
  double lam = 0.5 * (lo + hi);
  while (hi - lo > tol().containment * scale) {
    if (++it > tol().containment_max_iter) {
      throw NumericalError("containment: root-find did not converge");
    }
    lam = 0.5 * (lo + hi);
    if (phi(lam) > 1.0) {
      lo = lam;
    } else {
      hi = lam;
    }
  }
  return value_at(0.5 * (lo + hi));
}

bool hull_contains_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner, int k_per_axis) {
  for (const Vec& p : extreme_points(inner, k_per_axis)) {
    if (outer.quadratic_form(p) > 1.0 + tol().membership_slack) return false;
  }
  return true;
}

bool contains_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner) {
  // A sampled boundary point outside the outer set certifies non-containment.
  if (!hull_contains_ellipsoid(outer, inner, 8)) return false;
  return max_form_over_ellipsoid(outer, inner) <= 1.0 + tol().containment;
}

double point_ellipse_boundary_distance(const Ellipsoid& e, const Vec2& p) {
  if (e.dim() != 2) throw std::invalid_argument("point_ellipse_boundary_distance: 2D only");
  // Principal frame, first quadrant.
  const Vec d = (Vec(2) << p.x() - e.center()(0), p.y() - e.center()(1)).finished();
  const Vec q = e.eigenvectors().transpose() * d;
  const double a = e.semi_axis(0), b = e.semi_axis(1);
  const double px = std::abs(q(0)), py = std::abs(q(1));

  // F(t) = (a px/(t+a^2))^2 + (b py/(t+b^2))^2 - 1, decreasing on the root
  // branch; the closest boundary point is (a^2 px/(t+a^2), b^2 py/(t+b^2)).
  const auto F = [&](double t) {
    const double u = a * px / (t + a * a);
    const double v = b * py / (t + b * b);
    return u * u + v * v - 1.0;
  };
  const double f_inside = (px / a) * (px / a) + (py / b) * (py / b);
  double t_lo, t_hi;
  if (f_inside >= 1.0) {
    t_lo = 0.0;
    t_hi = std::max({a * px, b * py, 1.0});
    while (F(t_hi) > 0.0) t_hi *= 2.0;
  } else {
    // Interior point. The on-axis cases are closed-form (the off-axis branch
    // divides by the vanishing coordinate).
    if (px < 1e-14 * a && py < 1e-14 * b) return b;
    if (py < 1e-14 * b) {
      const double cusp = (a * a - b * b) / a;
      if (px >= cusp) return a - px;
      const double cx = a * a * px / (a * a - b * b);
      const double cy = b * std::sqrt(std::max(0.0, 1.0 - (cx / a) * (cx / a)));
      return std::hypot(cx - px, cy);
    }
    // Root lies in (-b^2, 0); F blows up at the left end since py != 0.
    t_hi = 0.0;
    const double bound = -std::min(a, b) * std::min(a, b);
    double step = -0.5 * bound;
    t_lo = bound + step;
    while (F(t_lo) < 0.0 && step > 1e-300) {
      step *= 0.5;
      t_lo = bound + step;
    }
  }
  for (int it = 0; it < 200 && t_hi - t_lo > tol().overlap_root * std::max(1.0, std::abs(t_hi)); ++it) {
    const double tm = 0.5 * (t_lo + t_hi);
    if (F(tm) > 0.0) {
      t_lo = tm;
    } else {
      t_hi = tm;
    }
  }
  const double t = 0.5 * (t_lo + t_hi);
  const double cx = a * a * px / (t + a * a);
  const double cy = b * b * py / (t + b * b);
  return std::hypot(cx - px, cy - py);
}

namespace {

// Distance from the origin to segment [p, q].
double origin_segment_distance(const Vec2& p, const Vec2& q) {
  const Vec2 d = q - p;
  const double len2 = d.squaredNorm();
  if (len2 <= 0.0) return p.norm();
  const double t = std::clamp(-p.dot(d) / len2, 0.0, 1.0);
  return (p + t * d).norm();
}

bool convex_polygon_contains_origin(const std::vector<Vec2>& poly) {
  bool pos = false, neg = false;
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % m];
    const double cr = p.x() * (q.y() - p.y()) - p.y() * (q.x() - p.x());
    if (cr > 0.0) pos = true;
    if (cr < 0.0) neg = true;
  }
  return !(pos && neg);
}

}  // namespace

bool overlaps_obstacle(const Ellipsoid& e, const Obstacle& obs) {
  if (e.dim() != 2) throw std::invalid_argument("overlaps_obstacle: 2D only");
  const Vec2 ec(e.center()(0), e.center()(1));
  if ((ec - obs.bounding_center()).norm() > e.max_semi_axis() + obs.bounding_radius()) {
    return false;
  }
  if (obs.kind == Obstacle::Kind::Circle) {
    Vec c(2);
    c << obs.center.x(), obs.center.y();
    if (contains_point(e, c)) return true;
    return point_ellipse_boundary_distance(e, obs.center) <= obs.radius + tol().membership_slack;
  }
  // Rectangle: map by L^T (M = L L^T) so the ellipse becomes the unit disc and
  // the rectangle a convex quadrilateral; exact disc/convex-polygon test.
  Eigen::LLT<Mat> llt(e.shape());
  if (llt.info() != Eigen::Success) throw NumericalError("overlaps_obstacle: Cholesky failed");
  const Mat Lt = Mat(llt.matrixL()).transpose();
  const auto map = [&](double x, double y) {
    Vec v(2);
    v << x - ec.x(), y - ec.y();
    const Vec w = Lt * v;
    return Vec2(w(0), w(1));
  };
  const std::vector<Vec2> poly = {
      map(obs.lo.x(), obs.lo.y()), map(obs.hi.x(), obs.lo.y()),
      map(obs.hi.x(), obs.hi.y()), map(obs.lo.x(), obs.hi.y())};
  if (convex_polygon_contains_origin(poly)) return true;
  for (int i = 0; i < 4; ++i) {
    if (origin_segment_distance(poly[i], poly[(i + 1) % 4]) <= 1.0 + tol().membership_slack) {
      return true;
    }
  }
  return false;
}

bool overlaps_obstacle_at(const Ellipsoid& e, const Vec2& center, const Obstacle& obs) {
  // Equivalent to translating the ellipse: move the obstacle the other way.
  const Vec2 off = center - Vec2(e.center()(0), e.center()(1));
  Obstacle shifted = obs;
  shifted.center -= off;
  shifted.lo -= off;
  shifted.hi -= off;
  return overlaps_obstacle(e, shifted);
}

double radical_inverse_base2(std::uint32_t i) {
  i = (i << 16) | (i >> 16);
  i = ((i & 0x00ff00ffu) << 8) | ((i & 0xff00ff00u) >> 8);
  i = ((i & 0x0f0f0f0fu) << 4) | ((i & 0xf0f0f0f0u) >> 4);
  i = ((i & 0x33333333u) << 2) | ((i & 0xccccccccu) >> 2);
  i = ((i & 0x55555555u) << 1) | ((i & 0xaaaaaaaau) >> 1);
  return static_cast<double>(i) * 0x1.0p-32;
}

std::vector<int> van_der_corput_order(int n) {
  if (n < 1) throw std::invalid_argument("van_der_corput_order: n must be >= 1");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [](int a, int b) {
    return radical_inverse_base2(static_cast<std::uint32_t>(a)) <
           radical_inverse_base2(static_cast<std::uint32_t>(b));
  });
  return idx;
}

}  // namespace fplan
