#pragma once

namespace fplan {

// All numerical tolerances used across the library, in one place.
struct Tolerances {
  double shape_symmetry = 1e-9;       // max |M - M^T| entry for a valid shape matrix
  double min_eigenvalue = 1e-10;      // ellipsoids flatter than this are rejected
  double membership_slack = 1e-12;    // boundary-inclusive point membership
  double containment = 1e-9;          // dual root-find tolerance (Lagrange multiplier)
  int containment_max_iter = 200;     // root-find iteration cap before numerical-failure
  double boundary_residual = 1e-9;    // extreme points must satisfy the boundary eq this well
  double overlap_root = 1e-9;         // point-to-ellipse distance root-find
  double node_quantum = 1e-6;         // config quantization for node deduplication (m)
};

inline const Tolerances& tol() {
  static const Tolerances t{};
  return t;
}

}  // namespace fplan
