#include "spatavg/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace spatavg::linalg {

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const Eigen::MatrixXd& symmetric) {
  const double floor = -kPsdTraceTolerance * std::abs(symmetric.trace());
  return min_eigenvalue(symmetric) >= floor;
}

}  // namespace spatavg::linalg
