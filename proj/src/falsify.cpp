#include "fplan/falsify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fplan/rng.hpp"

namespace fplan {

namespace {

Vec unit_direction(Rng& rng, int n) {
  Vec u(n);
  double nn = 0.0;
  do {
    for (int i = 0; i < n; ++i) u(i) = rng.normal();
    nn = u.norm();
  } while (nn < 1e-12);
  return u / nn;
}

}  // namespace

ShellDirections make_shell_directions(const Mat& P, const Mat& S, int count, std::uint64_t seed) {
  const int n = static_cast<int>(P.rows());
  Eigen::LLT<Mat> llt(P);
  if (llt.info() != Eigen::Success) throw NumericalError("shell directions: P not SPD");
  const Mat L = llt.matrixL();
  Rng rng(seed);
  ShellDirections out;
  out.s.resize(count);
  out.p.resize(count);
  for (int i = 0; i < count; ++i) {
    const Vec u = unit_direction(rng, n);
    const Vec d = L.transpose().triangularView<Eigen::Upper>().solve(u);
    out.s[i] = d.dot(S * d);
    out.p[i] = (P * d).norm();
  }
  const auto [s_lo, s_hi] = std::minmax_element(out.s.begin(), out.s.end());
  const auto [p_lo, p_hi] = std::minmax_element(out.p.begin(), out.p.end());
  out.s_spread = *s_hi - *s_lo;
  out.p_spread = *p_hi - *p_lo;
  return out;
}

double worst_margin_serial(const ShellDirections& dirs, double rho, double rhodot, double w_max) {
  const double sr = std::sqrt(rho);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dirs.s.size(); ++i) {
    const double m = rho * dirs.s[i] + 2.0 * w_max * sr * dirs.p[i] - rhodot;
    if (m > worst) worst = m;
  }
  return worst;
}

double worst_margin_parallel(const ShellDirections& dirs, double rho, double rhodot,
                             double w_max) {
  const double sr = std::sqrt(rho);
  const auto n = static_cast<std::int64_t>(dirs.s.size());
  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double m = rho * dirs.s[i] + 2.0 * w_max * sr * dirs.p[i] - rhodot;
    if (m > worst) worst = m;
  }
  return worst;
}

double recheck_profile(const Mat& P, const Mat& Acl, const std::vector<double>& rho,
                       const std::vector<double>& times, double w_max, int samples_per_knot,
                       std::uint64_t seed) {
  const int n = static_cast<int>(P.rows());
  const int knots = static_cast<int>(rho.size());
  Eigen::LLT<Mat> llt(P);
  if (llt.info() != Eigen::Success) throw NumericalError("recheck: P not SPD");
  const Mat L = llt.matrixL();
  const Mat S = Acl.transpose() * P + P * Acl;

  double worst = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
  for (int k = 0; k < knots - 1; ++k) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
    const double rhodot = (rho[k + 1] - rho[k]) / (times[k + 1] - times[k]);
    for (int i = 0; i < samples_per_knot; ++i) {
      const Vec u = unit_direction(rng, n);
      const Vec e = std::sqrt(rho[k]) *
                    Vec(L.transpose().triangularView<Eigen::Upper>().solve(u));
      const double vdot = e.dot(S * e);
      const double worst_noise = 2.0 * w_max * (P * e).norm();
      const double m = vdot + worst_noise - rhodot;
      if (m > worst) worst = m;
    }
  }
  return worst;
}

namespace {

double one_rollout(const Mat& P, const Mat& Acl, const Mat& B_noise,
                   const std::vector<double>& rho, const std::vector<double>& times,
                   const TubeSimParams& params, std::uint64_t seed) {
  const int n = static_cast<int>(P.rows());
  Eigen::LLT<Mat> llt(P);
  const Mat L = llt.matrixL();
  Rng rng(seed);

  // Start anywhere with V(0) <= v0_frac * rho(0): uniform direction, radius
  // biased toward the shell (worst region).
  const Vec u = unit_direction(rng, n);
  const double r = std::sqrt(rng.uniform(0.25, 1.0));
  Vec e = std::sqrt(params.v0_frac * rho.front()) * r *
          Vec(L.transpose().triangularView<Eigen::Upper>().solve(u));

  double worst = e.dot(P * e) / rho.front();
  double t = times.front();
  const double t_end = times.back();
  std::size_t next_knot = 1;
  const int noise_dim = static_cast<int>(B_noise.cols());
  while (t < t_end - 1e-12) {
    const double h = std::min(params.dt, t_end - t);
    // Bounded noise, constant over the step: uniform direction and magnitude.
    Vec w(noise_dim);
    for (int i = 0; i < noise_dim; ++i) w(i) = rng.normal();
    const double wn = w.norm();
    if (wn > 1e-12) w *= params.w_max * std::sqrt(rng.uniform()) / wn;
    const Vec bw = B_noise * w;
    const auto f = [&](const Vec& x) { return Vec(Acl * x + bw); };
    const Vec k1 = f(e);
    const Vec k2 = f(e + 0.5 * h * k1);
    const Vec k3 = f(e + 0.5 * h * k2);
    const Vec k4 = f(e + h * k3);
    e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    while (next_knot < times.size() && t >= times[next_knot] - 1e-9) {
      const double v = e.dot(P * e) / rho[next_knot];
      if (v > worst) worst = v;
      ++next_knot;
    }
  }
  return worst;
}

}  // namespace

double max_normalized_v_serial(const Mat& P, const Mat& Acl, const Mat& B_noise,
                               const std::vector<double>& rho, const std::vector<double>& times,
                               int trajectories, const TubeSimParams& params) {
  double worst = 0.0;
  for (int i = 0; i < trajectories; ++i) {
    const double v = one_rollout(P, Acl, B_noise, rho, times, params,
                                 Rng::derive(params.seed, static_cast<std::uint64_t>(i)));
    if (v > worst) worst = v;
  }
  return worst;
}

double max_normalized_v_parallel(const Mat& P, const Mat& Acl, const Mat& B_noise,
                                 const std::vector<double>& rho, const std::vector<double>& times,
                                 int trajectories, const TubeSimParams& params) {
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(dynamic)
  for (int i = 0; i < trajectories; ++i) {
    const double v = one_rollout(P, Acl, B_noise, rho, times, params,
                                 Rng::derive(params.seed, static_cast<std::uint64_t>(i)));
    if (v > worst) worst = v;
  }
  return worst;
}

}  // namespace fplan
