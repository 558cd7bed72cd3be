#pragma once

#include <Eigen/Dense>

#include "fplan/ellipsoid.hpp"

namespace fplan {

// Continuous algebraic Riccati equation A'P + PA - P B R^-1 B' P + Q = 0,
// solved through the stable invariant subspace of the Hamiltonian matrix.
Mat solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R);

// State-feedback gain K = R^-1 B' P for the CARE solution P.
Mat lqr_gain(const Mat& A, const Mat& B, const Mat& Q, const Mat& R);

// Continuous Lyapunov equation A'P + PA = -Q, via the Kronecker linear system.
Mat solve_lyapunov(const Mat& A, const Mat& Q);

bool is_hurwitz(const Mat& A);

// Planar double integrator (x, y, vx, vy) under u = u0(t) + K (x0(t) - x),
// with bounded process noise of amplitude w_max on the acceleration channels.
struct ClosedLoopModel {
  Mat A;      // 4x4 plant
  Mat B_in;   // 4x2 input map
  Mat K;      // 2x4 feedback gain
  double w_max = 0.0;

  static ClosedLoopModel double_integrator(const Vec& state_weights, const Vec& input_weights,
                                           double w_max);

  Mat closed_loop() const { return A - B_in * K; }
  int state_dim() const { return static_cast<int>(A.rows()); }
};

}  // namespace fplan
