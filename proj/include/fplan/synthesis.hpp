#pragma once

#include <cstdint>

#include "fplan/control.hpp"
#include "fplan/falsify.hpp"
#include "fplan/funnel.hpp"

namespace fplan {

struct GenParams {
  int bearings = 16;
  double epsilon = 5.0;           // inlet distance from the origin (m)
  double goal_pos_radius = 0.3;   // goal ball radius (m)
  double goal_vel_radius = 0.8;   // terminal velocity bound (m/s)
  double q_pos = 9.0;             // LQR weights
  double q_vel = 6.0;
  double r_in = 1.0;
  double w_max = 0.02;            // process-noise amplitude (m/s^2)
  double dt = 0.01;               // integration step (s)
  double knot_dt = 0.1;           // knot spacing (s)
  double settle_speed = 0.05;     // nominal termination speed (m/s)
  double max_sim_time = 30.0;     // nominal integration budget (s)
  int falsify_samples = 2000;     // boundary samples per level check
  int bisect_iters = 20;          // level bisection steps per knot
  double backoff_frac = 0.015;    // margin slack as a fraction of the sampled
                                  // form spread, so denser falsifiers still pass
  double delta_in = 0.5;          // steering match balls (m)
  double delta_out = 0.5;
  std::uint64_t seed = 1u;

  ClosedLoopModel make_model() const;
};

struct NominalTrajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> inputs;
};

// Integrates the closed loop from rest at q_start toward the origin setpoint
// with fixed-step RK4, knot-sampled; terminates once the position is inside
// the goal ball and the speed settles. A start already at the setpoint yields
// a single-knot result for the caller to reject.
NominalTrajectory nominal_trajectory(const ClosedLoopModel& model, const Vec2& q_start,
                                     const GenParams& params);

// Constant solution of the algebraic Lyapunov equation, exposed per-knot so a
// time-varying P(t) can drop in later.
std::vector<Mat> lyapunov_matrices(const ClosedLoopModel& model,
                                   const std::vector<double>& times);

// Terminal level from goal-set containment, then a backward sweep bisecting
// the largest level that survives boundary-sample falsification of the
// invariance condition (with the worst-case disturbance term).
std::vector<double> maximize_rho(const ClosedLoopModel& model, const Mat& P,
                                 const NominalTrajectory& nominal, const Ellipsoid& goal_set,
                                 const GenParams& params, double* worst_margin_out = nullptr);

// State-space goal set centered at the origin setpoint.
Ellipsoid goal_state_set(const GenParams& params);

FunnelLibrary generate_library(const GenParams& params);

}  // namespace fplan
