#pragma once

#include <vector>

#include "fplan/ellipsoid.hpp"
#include "fplan/obstacle.hpp"

namespace fplan {

// Exact ellipsoid-in-ellipsoid test: max over x in `inner` of the outer
// quadratic form, via the dual (Lagrange multiplier) root-find. A sampled
// convex-hull check runs first as a sound rejection filter; it never accepts.
bool contains_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner);

// Max of the outer quadratic form over the inner ellipsoid (the quantity the
// exact test compares against 1). Exposed for margin reporting.
double max_form_over_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner);

// Paper-style hull check: all extreme points of `inner` satisfy the outer
// form <= 1. Can false-accept (a finite point set under-approximates the
// ellipsoid); never the final arbiter.
bool hull_contains_ellipsoid(const Ellipsoid& outer, const Ellipsoid& inner, int k_per_axis);

// Exact (to root-find tolerance) ellipse/obstacle overlap test in R^2, with a
// bounding-circle first pass.
bool overlaps_obstacle(const Ellipsoid& e, const Obstacle& obs);

// Same test for the ellipse translated to `center`, without rebuilding it.
bool overlaps_obstacle_at(const Ellipsoid& e, const Vec2& center, const Obstacle& obs);

// Minimum distance from a point to the boundary of a 2D ellipse.
double point_ellipse_boundary_distance(const Ellipsoid& e, const Vec2& p);

// Indices 0..n-1 ordered by base-2 radical-inverse value.
std::vector<int> van_der_corput_order(int n);

double radical_inverse_base2(std::uint32_t i);

}  // namespace fplan
