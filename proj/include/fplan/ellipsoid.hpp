#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "fplan/tolerances.hpp"

namespace fplan {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solid ellipsoid {x : (x-c)^T M (x-c) <= 1} with M symmetric positive definite.
// Validated on construction; instances are immutable values.
class Ellipsoid {
 public:
  Ellipsoid(Vec center, Mat shape) : center_(std::move(center)), shape_(std::move(shape)) {
    if (shape_.rows() != shape_.cols() || center_.size() != shape_.rows()) {
      throw std::invalid_argument("ellipsoid: center/shape dimension mismatch");
    }
    if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > tol().shape_symmetry) {
      throw std::invalid_argument("ellipsoid: shape matrix not symmetric");
    }
    shape_ = 0.5 * (shape_ + shape_.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(shape_);
    if (es.info() != Eigen::Success) {
      throw NumericalError("ellipsoid: eigendecomposition failed");
    }
    if (es.eigenvalues().minCoeff() <= tol().min_eigenvalue) {
      throw std::invalid_argument("ellipsoid: shape matrix not positive definite");
    }
    eigvals_ = es.eigenvalues();
    eigvecs_ = es.eigenvectors();
  }

  int dim() const { return static_cast<int>(center_.size()); }
  const Vec& center() const { return center_; }
  const Mat& shape() const { return shape_; }

  // Ascending eigenvalues of M and the matching orthonormal eigenvectors.
  const Vec& eigenvalues() const { return eigvals_; }
  const Mat& eigenvectors() const { return eigvecs_; }

  // Semi-axis lengths paired with eigenvalues() (ascending), so semi_axis(0)
  // is the longest.
  double semi_axis(int i) const { return 1.0 / std::sqrt(eigvals_(i)); }
  double max_semi_axis() const { return 1.0 / std::sqrt(eigvals_(0)); }
  double min_semi_axis() const { return 1.0 / std::sqrt(eigvals_(eigvals_.size() - 1)); }

  double quadratic_form(const Vec& x) const {
    if (x.size() != center_.size()) {
      throw std::invalid_argument("ellipsoid: point dimension mismatch");
    }
    const Vec d = x - center_;
    return d.dot(shape_ * d);
  }

  Ellipsoid translated(const Vec& delta) const {
    Ellipsoid e = *this;
    e.center_ += delta;
    return e;
  }

 private:
  Vec center_;
  Mat shape_;
  Vec eigvals_;
  Mat eigvecs_;
};

// Boundary-inclusive membership.
inline bool contains_point(const Ellipsoid& e, const Vec& x) {
  return e.quadratic_form(x) <= 1.0 + tol().membership_slack;
}

// Exact shadow of an ellipsoid under an orthonormal basis selection B (n x d, d < n):
// the projected set is {y : (y - B^T c)^T S (y - B^T c) <= 1}, S = (B^T M^-1 B)^-1.
Ellipsoid project(const Ellipsoid& e, const Mat& basis);

// Boundary points: the 2n principal-axis endpoints, plus (for k_per_axis > 2)
// uniformly parameterized boundary samples. Every returned point satisfies the
// boundary equation to within tol().boundary_residual.
std::vector<Vec> extreme_points(const Ellipsoid& e, int k_per_axis);

}  // namespace fplan
