#include "fplan/funnel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fplan {

namespace {

Mat selection_basis(int n, const std::vector<int>& idx) {
  Mat B = Mat::Zero(n, static_cast<int>(idx.size()));
  for (int j = 0; j < static_cast<int>(idx.size()); ++j) B(idx[j], j) = 1.0;
  return B;
}

double polyline_length(const std::vector<Vec>& states, const std::vector<int>& cyclic_idx,
                       std::size_t from) {
  double len = 0.0;
  for (std::size_t k = from + 1; k < states.size(); ++k) {
    double seg = 0.0;
    for (int c : cyclic_idx) {
      const double d = states[k](c) - states[k - 1](c);
      seg += d * d;
    }
    len += std::sqrt(seg);
  }
  return len;
}

}  // namespace

Funnel::Funnel(std::string id, std::vector<double> knot_times, std::vector<Vec> states,
               std::vector<Vec> inputs, std::vector<Ellipsoid> ellipsoids,
               std::vector<int> cyclic_idx, std::vector<int> noncyclic_idx,
               LyapunovCertificate cert)
    : id_(std::move(id)),
      knot_times_(std::move(knot_times)),
      states_(std::move(states)),
      inputs_(std::move(inputs)),
      ellipsoids_(std::move(ellipsoids)),
      cyclic_idx_(std::move(cyclic_idx)),
      noncyclic_idx_(std::move(noncyclic_idx)),
      cert_(std::move(cert)) {
  const std::size_t n = knot_times_.size();
  if (n < 2) throw std::invalid_argument("funnel: need at least two knots");
  if (states_.size() != n || inputs_.size() != n || ellipsoids_.size() != n ||
      cert_.P.size() != n || cert_.rho.size() != n) {
    throw std::invalid_argument("funnel: per-knot array sizes differ");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(knot_times_[k] > knot_times_[k - 1])) {
      throw std::invalid_argument("funnel: knot times must be strictly increasing");
    }
  }
  const int dim = static_cast<int>(states_.front().size());
  std::vector<bool> covered(dim, false);
  for (int c : cyclic_idx_) {
    if (c < 0 || c >= dim || covered[c]) throw std::invalid_argument("funnel: bad cyclic index");
    covered[c] = true;
  }
  for (int c : noncyclic_idx_) {
    if (c < 0 || c >= dim || covered[c]) {
      throw std::invalid_argument("funnel: bad non-cyclic index");
    }
    covered[c] = true;
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw std::invalid_argument("funnel: cyclic/non-cyclic split must cover the state");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (states_[k].size() != dim || ellipsoids_[k].dim() != dim) {
      throw std::invalid_argument("funnel: state/ellipsoid dimension mismatch");
    }
    if (!contains_point(ellipsoids_[k], states_[k])) {
      throw std::invalid_argument("funnel: nominal state outside its knot ellipsoid");
    }
    if (cert_.rho[k] <= 0.0) throw std::invalid_argument("funnel: rho must be positive");
  }
  cost_ = polyline_length(states_, cyclic_idx_, 0);

  const Mat Bc = selection_basis(dim, cyclic_idx_);
  const Mat Bnc = selection_basis(dim, noncyclic_idx_);
  config_ellipses_.reserve(n);
  vel_ellipses_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    config_ellipses_.push_back(project(ellipsoids_[k], Bc));
    vel_ellipses_.push_back(project(ellipsoids_[k], Bnc));
  }
}

Mat Funnel::cyclic_basis() const { return selection_basis(state_dim(), cyclic_idx_); }
Mat Funnel::noncyclic_basis() const { return selection_basis(state_dim(), noncyclic_idx_); }

Vec2 Funnel::config(int k) const {
  if (cyclic_idx_.size() != 2) throw std::logic_error("funnel: planar configuration expected");
  return Vec2(states_[k](cyclic_idx_[0]), states_[k](cyclic_idx_[1]));
}

double funnel_cost(const Funnel& f) { return f.cost(); }

Funnel shift_funnel(const Funnel& f, const Vec& delta) {
  if (delta.size() != static_cast<Eigen::Index>(f.cyclic_idx().size())) {
    throw std::invalid_argument("shift_funnel: delta dimension mismatch");
  }
  std::vector<Vec> states = f.states();
  std::vector<Ellipsoid> ells;
  ells.reserve(f.knot_count());
  Vec full = Vec::Zero(f.state_dim());
  for (std::size_t j = 0; j < f.cyclic_idx().size(); ++j) full(f.cyclic_idx()[j]) = delta(j);
  for (auto& s : states) s += full;
  for (int k = 0; k < f.knot_count(); ++k) ells.push_back(f.ellipsoids()[k].translated(full));
  return Funnel(f.id(), f.knot_times(), std::move(states), f.inputs(), std::move(ells),
                f.cyclic_idx(), f.noncyclic_idx(), f.certificate());
}

Funnel truncate_funnel(const Funnel& f, int k) {
  if (k < 0 || k >= f.knot_count() - 1) {
    throw std::invalid_argument("truncate_funnel: knot index out of range");
  }
  const auto slice = [k](const auto& v) {
    return std::decay_t<decltype(v)>(v.begin() + k, v.end());
  };
  LyapunovCertificate cert = f.certificate();
  cert.P = slice(cert.P);
  cert.rho = slice(cert.rho);
  return Funnel(f.id(), slice(f.knot_times()), slice(f.states()), slice(f.inputs()),
                slice(f.ellipsoids()), f.cyclic_idx(), f.noncyclic_idx(), std::move(cert));
}

const Funnel* FunnelLibrary::find(const std::string& id) const {
  for (const auto& f : funnels) {
    if (f.id() == id) return &f;
  }
  return nullptr;
}

double FunnelLibrary::angular_tolerance() const {
  return M_PI / std::max<std::size_t>(1, funnels.size());
}

void FunnelLibrary::validate() const {
  if (funnels.empty()) return;
  const int dim = funnels.front().state_dim();
  const auto& cyc = funnels.front().cyclic_idx();
  const auto& ncyc = funnels.front().noncyclic_idx();
  Vec2 origin(0.0, 0.0);
  Vec c(2);
  c << 0.0, 0.0;
  const Ellipsoid goal_ball(c, Mat::Identity(2, 2) / (goal_ball_radius * goal_ball_radius));
  for (const auto& f : funnels) {
    if (f.state_dim() != dim || f.cyclic_idx() != cyc || f.noncyclic_idx() != ncyc) {
      throw std::invalid_argument("library: funnels disagree on state split");
    }
    if (!contains_ellipsoid(goal_ball, f.config_ellipse(f.knot_count() - 1))) {
      throw std::invalid_argument("library: terminal ellipse escapes the goal ball");
    }
  }
}

FunnelEdge::FunnelEdge(const Funnel* source, Vec2 shift, int truncate_from_knot, Vec2 q_from,
                       Vec2 q_to)
    : source_(source),
      shift_(shift),
      trunc_(truncate_from_knot),
      q_from_(q_from),
      q_to_(q_to),
      inlet_config_(source->config_ellipse(truncate_from_knot)
                        .translated((Vec(2) << shift.x(), shift.y()).finished())),
      outlet_config_(source->config_ellipse(source->knot_count() - 1)
                         .translated((Vec(2) << shift.x(), shift.y()).finished())),
      inlet_vel_(source->vel_ellipse(truncate_from_knot)),
      outlet_vel_(source->vel_ellipse(source->knot_count() - 1)) {
  if (trunc_ < 0 || trunc_ >= source_->knot_count() - 1) {
    throw std::invalid_argument("funnel edge: truncation knot out of range");
  }
  time_shift_ = source_->knot_times()[trunc_];
  double len = 0.0;
  for (int k = trunc_ + 1; k < source_->knot_count(); ++k) {
    len += (source_->config(k) - source_->config(k - 1)).norm();
  }
  cost_ = len;

  Vec2 lo = knot_config(0), hi = knot_config(0);
  double max_semi = 0.0;
  for (int i = 0; i < retained_knots(); ++i) {
    const Vec2 c = knot_config(i);
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
    max_semi = std::max(max_semi, source_->config_ellipse(trunc_ + i).max_semi_axis());
  }
  tube_center_ = 0.5 * (lo + hi);
  tube_radius_ = 0.5 * (hi - lo).norm() + max_semi;
  vdc_order_ = van_der_corput_order(retained_knots());
}

Vec2 FunnelEdge::knot_config(int i) const { return source_->config(trunc_ + i) + shift_; }

Vec FunnelEdge::knot_state(int i) const {
  Vec s = source_->states()[trunc_ + i];
  const auto& cyc = source_->cyclic_idx();
  s(cyc[0]) += shift_.x();
  s(cyc[1]) += shift_.y();
  return s;
}

double FunnelEdge::normalized_v(const Vec& state, int i) const {
  const Vec e = state - knot_state(i);
  return e.dot(P() * e) / rho(i);
}

bool FunnelEdge::collides(const Obstacle& obs) const {
  if ((tube_center_ - obs.bounding_center()).norm() > tube_radius_ + obs.bounding_radius()) {
    return false;
  }
  for (int i : vdc_order_) {
    if (overlaps_obstacle_at(source_->config_ellipse(trunc_ + i), knot_config(i), obs)) {
      return true;
    }
  }
  return false;
}

bool FunnelEdge::collides_any(std::span<const Obstacle> obstacles) const {
  for (const auto& obs : obstacles) {
    if (collides(obs)) return true;
  }
  return false;
}

bool FunnelEdge::same_primitive(const FunnelEdge& other) const {
  return source_->id() == other.source_->id() && trunc_ == other.trunc_ &&
         (shift_ - other.shift_).cwiseAbs().maxCoeff() <= 1e-9;
}

bool compossible(const FunnelEdge& f1, const FunnelEdge& f2) {
  if (f1.source().state_dim() != f2.source().state_dim() ||
      f1.source().cyclic_idx() != f2.source().cyclic_idx()) {
    throw std::invalid_argument("compossible: state split mismatch");
  }
  return contains_ellipsoid(f2.inlet_vel(), f1.outlet_vel());
}

std::optional<FunnelEdge> find_funnel(const FunnelLibrary& lib, const Vec2& q_from,
                                      const Vec2& q_to) {
  if (lib.funnels.empty()) throw std::logic_error("find_funnel: empty library");
  const Vec2 d = q_from - q_to;
  const double dist = d.norm();
  if (dist < 1e-12) return std::nullopt;
  const double bearing = std::atan2(d.y(), d.x());

  const Funnel* best = nullptr;
  double best_inlet_dist = 0.0;
  for (const auto& f : lib.funnels) {
    const int last = f.knot_count() - 1;
    const Vec2 disp = f.config(0) - f.config(last);
    if (disp.norm() < 1e-12) continue;
    double ang = std::atan2(disp.y(), disp.x()) - bearing;
    while (ang > M_PI) ang -= 2.0 * M_PI;
    while (ang < -M_PI) ang += 2.0 * M_PI;
    if (std::abs(ang) > lib.angular_tolerance() + 1e-12) continue;
    const Vec2 inlet_center = q_to + disp;
    const double inlet_dist = (inlet_center - q_from).norm();
    if (best == nullptr || inlet_dist < best_inlet_dist - 1e-15) {
      best = &f;
      best_inlet_dist = inlet_dist;
    }
  }
  if (best == nullptr) return std::nullopt;

  const int last = best->knot_count() - 1;
  const Vec2 delta = q_to - best->config(last);
  // Among the knots still at-or-behind q_from along the approach (so the
  // retained arc never undercuts the anchor distance), take the one whose
  // center sits closest to q_from.
  int k_star = -1;
  double k_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= best->knot_count() - 2; ++k) {
    if ((best->config(k) + delta - q_to).norm() < dist) break;
    const double dk = (best->config(k) + delta - q_from).norm();
    if (dk < k_dist) {
      k_star = k;
      k_dist = dk;
    }
  }
  if (k_star < 0) {  // q_from beyond the inlet; only the full funnel can serve
    k_star = 0;
    k_dist = (best->config(0) + delta - q_from).norm();
  }
  if (k_dist > lib.delta_in) return std::nullopt;
  Vec probe(2);
  probe << q_from.x() - delta.x(), q_from.y() - delta.y();
  if (best->config_ellipse(k_star).quadratic_form(probe) > 1.0 + tol().membership_slack) {
    return std::nullopt;
  }
  FunnelEdge edge(best, delta, k_star, q_from, q_to);
  if (edge.cost() < dist - 1e-12) return std::nullopt;  // keeps edge costs metric
  return edge;
}

std::optional<FunnelEdge> steer(const Vec2& q1, const Vec2& q2, const FunnelLibrary& lib,
                                std::span<const Obstacle> obstacles) {
  if ((q1 - q2).norm() < 1e-12) throw std::invalid_argument("steer: q1 must differ from q2");
  auto edge = find_funnel(lib, q1, q2);
  if (!edge) return std::nullopt;
  if (edge->collides_any(obstacles)) return std::nullopt;
  return edge;
}

bool in_funnel(const Vec2& q, std::span<const FunnelEdge> edges) {
  Vec p(2);
  p << q.x(), q.y();
  for (const auto& e : edges) {
    if (e.inlet_config().quadratic_form(p) <= 1.0 + tol().membership_slack) return true;
  }
  return false;
}

}  // namespace fplan
