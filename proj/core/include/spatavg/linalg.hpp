#pragma once

#include <Eigen/Core>

namespace spatavg::linalg {

/// Eigenvalue floor below which a symmetric matrix is not accepted as PSD,
/// relative to its trace.
inline constexpr double kPsdTraceTolerance = 1e-8;
inline constexpr double kSymmetryTolerance = 1e-10;

bool is_symmetric(const Eigen::MatrixXd& a, double tol = kSymmetryTolerance);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

/// min eigenvalue >= -kPsdTraceTolerance * |trace|.
bool is_psd(const Eigen::MatrixXd& symmetric);

/// Quadratic form x' A x.
inline double quad(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  return x.dot(a * x);
}

/// Sum over i != j of x_i x_j a_ij, i.e. 2 * sum_{i<j} for symmetric a.
inline double off_diagonal_quad(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  return quad(a, x) - x.cwiseAbs2().dot(a.diagonal());
}

}  // namespace spatavg::linalg
