#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fplan/control.hpp"
#include "fplan/ellipsoid.hpp"

namespace fplan {

// Boundary-sample falsification of the level-set invariance condition
//   V = rho(t)  =>  Vdot + ||dV/dx|| w_max <= rhodot,
// for the quadratic V = e' P e with LTI error dynamics e' = Acl e.
//
// On the shell e' P e = rho, writing e = sqrt(rho) d with d = L^-T u,
// ||u|| = 1, P = L L', the per-direction margin factorizes as
//   margin(d) = rho (d' S d) + 2 w_max sqrt(rho) ||P d|| - rhodot,
// with S = Acl' P + P Acl. The kernels take the precomputed per-direction
// coefficients and return the worst (largest) margin; <= 0 means verified.

struct ShellDirections {
  std::vector<double> s;  // d' S d per direction
  std::vector<double> p;  // ||P d|| per direction
  double s_spread = 0.0;  // max - min of s, for margin slack scaling
  double p_spread = 0.0;
};

// Deterministic unit directions on the P-shell (seeded), plus coefficients.
ShellDirections make_shell_directions(const Mat& P, const Mat& S, int count, std::uint64_t seed);

double worst_margin_serial(const ShellDirections& dirs, double rho, double rhodot, double w_max);
double worst_margin_parallel(const ShellDirections& dirs, double rho, double rhodot, double w_max);

// Independent checker: re-evaluates the condition from scratch (fresh
// directions, no factorization) for every knot of a rho profile. Returns the
// worst margin found across all sampled boundary points and knots.
double recheck_profile(const Mat& P, const Mat& Acl, const std::vector<double>& rho,
                       const std::vector<double>& times, double w_max, int samples_per_knot,
                       std::uint64_t seed);

// Monte-Carlo tube check on the error dynamics e' = Acl e + B w with bounded
// piecewise-constant noise: integrates `trajectories` RK4 rollouts from
// states with V(0) <= v0_frac * rho(0) and returns the max over rollouts and
// knots of the normalized value V(t_k)/rho(t_k).
struct TubeSimParams {
  double dt = 0.01;
  double v0_frac = 0.9;
  double w_max = 0.0;
  std::uint64_t seed = 1;
};

double max_normalized_v_serial(const Mat& P, const Mat& Acl, const Mat& B_noise,
                               const std::vector<double>& rho, const std::vector<double>& times,
                               int trajectories, const TubeSimParams& params);
double max_normalized_v_parallel(const Mat& P, const Mat& Acl, const Mat& B_noise,
                                 const std::vector<double>& rho, const std::vector<double>& times,
                                 int trajectories, const TubeSimParams& params);

}  // namespace fplan
