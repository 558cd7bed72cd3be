#include "fplan/control.hpp"

#include <complex>

namespace fplan {

Mat solve_care(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
  const int n = static_cast<int>(A.rows());
  const Mat Rinv = R.inverse();
  Mat H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A;
  H.topRightCorner(n, n) = -B * Rinv * B.transpose();
  H.bottomLeftCorner(n, n) = -Q;
  H.bottomRightCorner(n, n) = -A.transpose();

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H.cast<std::complex<double>>());
  if (es.info() != Eigen::Success) throw NumericalError("care: eigendecomposition failed");

  Eigen::MatrixXcd basis(2 * n, n);
  int k = 0;
  for (int i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()(i).real() < 0.0) {
      if (k == n) throw NumericalError("care: too many stable eigenvalues");
      basis.col(k++) = es.eigenvectors().col(i);
    }
  }
  if (k != n) throw NumericalError("care: stable subspace has wrong dimension");

  const Eigen::MatrixXcd X1 = basis.topRows(n);
  const Eigen::MatrixXcd X2 = basis.bottomRows(n);
  const Eigen::MatrixXcd Pc = X2 * X1.fullPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
  Mat P = Pc.real();
  P = 0.5 * (P + P.transpose());

  const Mat residual =
      A.transpose() * P + P * A - P * B * Rinv * B.transpose() * P + Q;
  if (residual.cwiseAbs().maxCoeff() > 1e-6 * std::max(1.0, Q.cwiseAbs().maxCoeff())) {
    throw NumericalError("care: residual check failed");
  }
  return P;
}

Mat lqr_gain(const Mat& A, const Mat& B, const Mat& Q, const Mat& R) {
  const Mat P = solve_care(A, B, Q, R);
  return R.inverse() * B.transpose() * P;
}

Mat solve_lyapunov(const Mat& A, const Mat& Q) {
  const int n = static_cast<int>(A.rows());
  // vec(A'P + PA) = (I (x) A' + A' (x) I) vec(P), column-major vec.
  Mat M = Mat::Zero(n * n, n * n);
  const Mat At = A.transpose();
  const Mat I = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      M.block(i * n, j * n, n, n) += I(i, j) * At;  // I (x) A'
      M.block(i * n, j * n, n, n) += At(i, j) * I;  // A' (x) I
    }
  }
  Vec q(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) q(j * n + i) = -Q(i, j);
  const Vec p = M.fullPivLu().solve(q);
  Mat P(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) P(i, j) = p(j * n + i);
  P = 0.5 * (P + P.transpose());
  const Mat residual = A.transpose() * P + P * A + Q;
  if (residual.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, Q.cwiseAbs().maxCoeff())) {
    throw NumericalError("lyapunov: residual check failed");
  }
  return P;
}

bool is_hurwitz(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A);
  if (es.info() != Eigen::Success) throw NumericalError("is_hurwitz: eigensolver failed");
  return es.eigenvalues().real().maxCoeff() < 0.0;
}

ClosedLoopModel ClosedLoopModel::double_integrator(const Vec& state_weights,
                                                   const Vec& input_weights, double w_max) {
  if (state_weights.size() != 4 || input_weights.size() != 2) {
    throw std::invalid_argument("double_integrator: need 4 state and 2 input weights");
  }
  if (w_max < 0.0) throw std::invalid_argument("double_integrator: w_max must be >= 0");
  ClosedLoopModel m;
  m.A = Mat::Zero(4, 4);
  m.A(0, 2) = 1.0;
  m.A(1, 3) = 1.0;
  m.B_in = Mat::Zero(4, 2);
  m.B_in(2, 0) = 1.0;
  m.B_in(3, 1) = 1.0;
  m.K = lqr_gain(m.A, m.B_in, Mat(state_weights.asDiagonal()), Mat(input_weights.asDiagonal()));
  m.w_max = w_max;
  if (!is_hurwitz(m.closed_loop())) throw NumericalError("double_integrator: closed loop unstable");
  return m;
}

}  // namespace fplan
