#pragma once

#include "fplan/synthesis.hpp"

namespace fplan::testing {

// One shared 16-funnel library for all test cases (full defaults are slow to
// regenerate per test; the acceptance suite builds its own at full density).
inline const FunnelLibrary& test_library() {
  static const FunnelLibrary lib = [] {
    GenParams p;
    p.falsify_samples = 500;
    return generate_library(p);
  }();
  return lib;
}

// Straight-line constant-velocity funnel for algebraic tests: from `from` to
// `to` over `knots` knots in unit time, unit ellipsoids.
inline Funnel straight_funnel(const Vec2& from, const Vec2& to, int knots,
                              const std::string& id = "s") {
  std::vector<double> times;
  std::vector<Vec> states, inputs;
  std::vector<Ellipsoid> ells;
  LyapunovCertificate cert;
  const Vec2 vel = to - from;
  for (int k = 0; k < knots; ++k) {
    const double a = static_cast<double>(k) / (knots - 1);
    times.push_back(a);
    Vec s(4);
    s << from.x() + a * vel.x(), from.y() + a * vel.y(), vel.x(), vel.y();
    states.push_back(s);
    inputs.push_back(Vec::Zero(2));
    ells.emplace_back(s, Mat::Identity(4, 4));
    cert.P.push_back(Mat::Identity(4, 4));
    cert.rho.push_back(1.0);
  }
  return Funnel(id, times, states, inputs, ells, {0, 1}, {2, 3}, cert);
}

}  // namespace fplan::testing
