#include "fplan/synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fplan/rng.hpp"

namespace fplan {

ClosedLoopModel GenParams::make_model() const {
  Vec qw(4), rw(2);
  qw << q_pos, q_pos, q_vel, q_vel;
  rw << r_in, r_in;
  return ClosedLoopModel::double_integrator(qw, rw, w_max);
}

NominalTrajectory nominal_trajectory(const ClosedLoopModel& model, const Vec2& q_start,
                                     const GenParams& params) {
  const Mat Acl = model.closed_loop();
  const int steps_per_knot = static_cast<int>(std::lround(params.knot_dt / params.dt));
  if (steps_per_knot < 1) throw std::invalid_argument("nominal: knot_dt below dt");

  Vec x = Vec::Zero(4);
  x(0) = q_start.x();
  x(1) = q_start.y();

  NominalTrajectory out;
  const auto push_knot = [&](double t, const Vec& s) {
    out.times.push_back(t);
    out.states.push_back(s);
    out.inputs.push_back(-model.K * s);  // u0 = K (0 - x0)
  };
  const auto settled = [&](const Vec& s) {
    return s.head(2).norm() <= params.goal_pos_radius && s.tail(2).norm() < params.settle_speed;
  };

  push_knot(0.0, x);
  if (settled(x)) return out;  // degenerate single-knot, rejected by the caller

  const int max_knots = static_cast<int>(params.max_sim_time / params.knot_dt);
  for (int knot = 1; knot <= max_knots; ++knot) {
    for (int s = 0; s < steps_per_knot; ++s) {
      const double h = params.dt;
      const Vec k1 = Acl * x;
      const Vec k2 = Acl * (x + 0.5 * h * k1);
      const Vec k3 = Acl * (x + 0.5 * h * k2);
      const Vec k4 = Acl * (x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    push_knot(knot * params.knot_dt, x);
    if (settled(x)) return out;
  }
  throw SynthesisError("nominal: trajectory did not settle within the time budget");
}

std::vector<Mat> lyapunov_matrices(const ClosedLoopModel& model,
                                   const std::vector<double>& times) {
  if (!is_hurwitz(model.closed_loop())) {
    throw SynthesisError("lyapunov: closed loop is not Hurwitz");
  }
  Mat P;
  try {
    P = solve_lyapunov(model.closed_loop(), Mat::Identity(model.state_dim(), model.state_dim()));
  } catch (const NumericalError& e) {
    throw SynthesisError(std::string("lyapunov: ") + e.what());
  }
  return std::vector<Mat>(times.size(), P);
}

Ellipsoid goal_state_set(const GenParams& params) {
  Mat G = Mat::Zero(4, 4);
  G(0, 0) = G(1, 1) = 1.0 / (params.goal_pos_radius * params.goal_pos_radius);
  G(2, 2) = G(3, 3) = 1.0 / (params.goal_vel_radius * params.goal_vel_radius);
  return Ellipsoid(Vec::Zero(4), G);
}

std::vector<double> maximize_rho(const ClosedLoopModel& model, const Mat& P,
                                 const NominalTrajectory& nominal, const Ellipsoid& goal_set,
                                 const GenParams& params, double* worst_margin_out) {
  const int n = static_cast<int>(nominal.times.size());
  if (n < 2) throw SynthesisError("maximize_rho: degenerate nominal");
  if (!contains_point(goal_set, nominal.states.back())) {
    throw SynthesisError("maximize_rho: goal set misses the terminal state");
  }

  // Terminal level: largest rho with E(t_f) = {V <= rho} inside the goal set.
  const Vec& xf = nominal.states.back();
  const auto terminal_ok = [&](double rho) {
    return contains_ellipsoid(goal_set, Ellipsoid(xf, P / rho));
  };
  double lo = 1e-9;
  if (!terminal_ok(lo)) throw SynthesisError("maximize_rho: goal set too small for P shape");
  double hi = 1e-3;
  int guard = 0;
  while (terminal_ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 100) throw SynthesisError("maximize_rho: terminal level unbounded");
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (terminal_ok(mid) ? lo : hi) = mid;
  }
  const double rho_f = lo;

  const Mat S = model.closed_loop().transpose() * P + P * model.closed_loop();
  const ShellDirections dirs =
      make_shell_directions(P, S, params.falsify_samples, Rng::derive(params.seed, 0xFA15u));

  std::vector<double> rho(n, rho_f);
  for (int k = n - 2; k >= 0; --k) {
    const double dt = nominal.times[k + 1] - nominal.times[k];
    const auto feasible = [&](double r) {
      const double rhodot = (rho[k + 1] - r) / dt;
      const double slack = params.backoff_frac *
                           (r * dirs.s_spread + 2.0 * model.w_max * std::sqrt(r) * dirs.p_spread);
      return worst_margin_parallel(dirs, r, rhodot, model.w_max) <= -slack;
    };
    if (!feasible(rho[k + 1])) {
      throw SynthesisError("maximize_rho: level not sustainable against disturbance");
    }
    double flo = rho[k + 1];
    double fhi = flo * 2.0;
    guard = 0;
    while (feasible(fhi)) {
      flo = fhi;
      fhi *= 2.0;
      if (++guard > 60) throw SynthesisError("maximize_rho: level growth unbounded");
    }
    for (int it = 0; it < params.bisect_iters; ++it) {
      const double mid = 0.5 * (flo + fhi);
      (feasible(mid) ? flo : fhi) = mid;
    }
    rho[k] = flo;
  }

  if (worst_margin_out != nullptr) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < n; ++k) {
      const double rhodot = (rho[k + 1] - rho[k]) / (nominal.times[k + 1] - nominal.times[k]);
      worst = std::max(worst, worst_margin_parallel(dirs, rho[k], rhodot, model.w_max));
    }
    *worst_margin_out = worst;
  }
  return rho;
}

FunnelLibrary generate_library(const GenParams& params) {
  const ClosedLoopModel model = params.make_model();
  const Ellipsoid goal = goal_state_set(params);

  std::vector<Funnel> funnels;
  funnels.reserve(params.bearings);
  std::vector<std::string> errors(params.bearings);
  std::vector<std::optional<Funnel>> slots(params.bearings);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < params.bearings; ++i) {
    try {
      const double th = 2.0 * M_PI * i / params.bearings;
      const Vec2 q_start(params.epsilon * std::cos(th), params.epsilon * std::sin(th));
      const NominalTrajectory nom = nominal_trajectory(model, q_start, params);
      if (nom.times.size() < 2) throw SynthesisError("degenerate nominal");
      const std::vector<Mat> P_seq = lyapunov_matrices(model, nom.times);
      double worst_margin = 0.0;
      const std::vector<double> rho =
          maximize_rho(model, P_seq.front(), nom, goal, params, &worst_margin);

      std::vector<Ellipsoid> ells;
      ells.reserve(nom.times.size());
      for (std::size_t k = 0; k < nom.times.size(); ++k) {
        ells.emplace_back(nom.states[k], P_seq[k] / rho[k]);
      }
      LyapunovCertificate cert{P_seq, rho, params.falsify_samples, worst_margin};
      char id[8];
      std::snprintf(id, sizeof(id), "b%02d", i);
      slots[i].emplace(id, nom.times, nom.states, nom.inputs, std::move(ells),
                       std::vector<int>{0, 1}, std::vector<int>{2, 3}, std::move(cert));
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < params.bearings; ++i) {
    if (!errors[i].empty()) {
      throw SynthesisError("bearing " + std::to_string(i) + ": " + errors[i]);
    }
    funnels.push_back(std::move(*slots[i]));
  }

  // Independent re-check at 10x sample density with a fresh seed.
  for (const auto& f : funnels) {
    const double margin =
        recheck_profile(f.certificate().P.front(), model.closed_loop(), f.certificate().rho,
                        f.knot_times(), model.w_max, 10 * params.falsify_samples,
                        Rng::derive(params.seed, 0xC0FFEEu));
    if (margin > 0.0) {
      throw SynthesisError("funnel " + f.id() + " failed the independent falsifier");
    }
  }

  FunnelLibrary lib;
  lib.funnels = std::move(funnels);
  lib.epsilon = params.epsilon;
  lib.goal_ball_radius = params.goal_pos_radius;
  lib.delta_in = params.delta_in;
  lib.delta_out = params.delta_out;
  std::ostringstream meta;
  meta << "bearings=" << params.bearings << " epsilon=" << params.epsilon
       << " q_pos=" << params.q_pos << " q_vel=" << params.q_vel << " r_in=" << params.r_in
       << " w_max=" << params.w_max << " dt=" << params.dt << " knot_dt=" << params.knot_dt
       << " goal_vel_radius=" << params.goal_vel_radius << " seed=" << params.seed;
  lib.metadata["generator"] = meta.str();
  lib.validate();
  return lib;
}

}  // namespace fplan
