#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fplan/geometry.hpp"

namespace fplan {

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LyapunovCertificate {
  std::vector<Mat> P;       // per-knot quadratic form (constant for an LTI loop)
  std::vector<double> rho;  // per-knot level value, > 0
  int boundary_samples = 0;
  double worst_margin = 0.0;  // <= 0 when the invariance condition verified
};

// Verified trajectory tube: nominal trajectory, inputs and state-space
// invariant ellipsoids at discrete knots over a finite time interval.
class Funnel {
 public:
  Funnel(std::string id, std::vector<double> knot_times, std::vector<Vec> states,
         std::vector<Vec> inputs, std::vector<Ellipsoid> ellipsoids, std::vector<int> cyclic_idx,
         std::vector<int> noncyclic_idx, LyapunovCertificate cert);

  const std::string& id() const { return id_; }
  int knot_count() const { return static_cast<int>(knot_times_.size()); }
  const std::vector<double>& knot_times() const { return knot_times_; }
  const std::vector<Vec>& states() const { return states_; }
  const std::vector<Vec>& inputs() const { return inputs_; }
  const std::vector<Ellipsoid>& ellipsoids() const { return ellipsoids_; }
  const std::vector<int>& cyclic_idx() const { return cyclic_idx_; }
  const std::vector<int>& noncyclic_idx() const { return noncyclic_idx_; }
  const LyapunovCertificate& certificate() const { return cert_; }
  double cost() const { return cost_; }

  int state_dim() const { return static_cast<int>(states_.front().size()); }
  Mat cyclic_basis() const;
  Mat noncyclic_basis() const;

  // Configuration (cyclic) component of the nominal state at a knot.
  Vec2 config(int k) const;

  // Cached projections of the knot ellipsoids.
  const Ellipsoid& config_ellipse(int k) const { return config_ellipses_[k]; }
  const Ellipsoid& vel_ellipse(int k) const { return vel_ellipses_[k]; }

 private:
  std::string id_;
  std::vector<double> knot_times_;
  std::vector<Vec> states_;
  std::vector<Vec> inputs_;
  std::vector<Ellipsoid> ellipsoids_;
  std::vector<int> cyclic_idx_;
  std::vector<int> noncyclic_idx_;
  LyapunovCertificate cert_;
  double cost_ = 0.0;
  std::vector<Ellipsoid> config_ellipses_;
  std::vector<Ellipsoid> vel_ellipses_;
};

// Polyline length of the configuration-space projection of the nominal.
double funnel_cost(const Funnel& f);

// Translate along the cyclic coordinates only; shapes and costs unchanged.
Funnel shift_funnel(const Funnel& f, const Vec& delta);

// Retain knots k..end; a suffix of an invariant tube is invariant to the same
// terminal set.
Funnel truncate_funnel(const Funnel& f, int k);

struct FunnelLibrary {
  std::vector<Funnel> funnels;  // ordered by id
  double epsilon = 5.0;
  double goal_ball_radius = 0.3;
  double delta_in = 0.5;
  double delta_out = 0.5;
  std::map<std::string, std::string> metadata;

  const Funnel* find(const std::string& id) const;
  // Half the bearing spacing, assuming one funnel per bearing.
  double angular_tolerance() const;
  void validate() const;
};

// A library funnel composed with a cyclic shift and an inlet-side truncation;
// projections are cached at construction since collision checks dominate.
class FunnelEdge {
 public:
  FunnelEdge(const Funnel* source, Vec2 shift, int truncate_from_knot, Vec2 q_from, Vec2 q_to);

  const Funnel& source() const { return *source_; }
  const std::string& library_id() const { return source_->id(); }
  const Vec2& shift() const { return shift_; }
  double time_shift() const { return time_shift_; }
  int truncate_from_knot() const { return trunc_; }
  int retained_knots() const { return source_->knot_count() - trunc_; }
  double cost() const { return cost_; }
  const Vec2& q_from() const { return q_from_; }
  const Vec2& q_to() const { return q_to_; }

  // Retained-knot views (index 0 = inlet knot).
  Vec2 knot_config(int i) const;
  Vec knot_state(int i) const;
  double knot_time(int i) const { return source_->knot_times()[trunc_ + i]; }
  double rho(int i) const { return source_->certificate().rho[trunc_ + i]; }
  const Mat& P() const { return source_->certificate().P.front(); }

  const Ellipsoid& inlet_config() const { return inlet_config_; }
  const Ellipsoid& outlet_config() const { return outlet_config_; }
  const Ellipsoid& inlet_vel() const { return inlet_vel_; }
  const Ellipsoid& outlet_vel() const { return outlet_vel_; }

  // Normalized Lyapunov value of a state against the retained knot i.
  double normalized_v(const Vec& state, int i) const;

  // Collision of any retained workspace ellipse with the obstacle, checked in
  // Van der Corput knot order behind a whole-tube bounding circle.
  bool collides(const Obstacle& obs) const;
  bool collides_any(std::span<const Obstacle> obstacles) const;

  bool same_primitive(const FunnelEdge& other) const;

 private:
  const Funnel* source_;
  Vec2 shift_;
  int trunc_;
  double time_shift_;
  Vec2 q_from_, q_to_;
  double cost_;
  Ellipsoid inlet_config_, outlet_config_, inlet_vel_, outlet_vel_;
  Vec2 tube_center_;
  double tube_radius_;
  std::vector<int> vdc_order_;
};

// Motion-plan compossibility: outlet of f1 contained in the inlet of f2 after
// projecting onto the non-cyclic subspace. Cyclic coordinates are excluded
// because the library funnel is shifted to align them.
bool compossible(const FunnelEdge& f1, const FunnelEdge& f2);

// Library lookup: nearest-bearing funnel toward (q_from - q_to), shifted so
// the outlet centers on q_to and truncated so the inlet center is at-or-behind
// q_from within delta_in of it. Empty optional when no candidate fits.
std::optional<FunnelEdge> find_funnel(const FunnelLibrary& lib, const Vec2& q_from,
                                      const Vec2& q_to);

// find_funnel plus the collision gate of the steering routine.
std::optional<FunnelEdge> steer(const Vec2& q1, const Vec2& q2, const FunnelLibrary& lib,
                                std::span<const Obstacle> obstacles);

// Reference predicate: q lies in some edge's inlet configuration ellipse.
bool in_funnel(const Vec2& q, std::span<const FunnelEdge> edges);

}  // namespace fplan
