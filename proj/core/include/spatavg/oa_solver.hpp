#pragma once

#include "spatavg/data_model.hpp"
#include "spatavg/delta_stats.hpp"
#include "spatavg/moments.hpp"

#include <Eigen/Core>

#include <vector>

namespace spatavg {

/// min beta' Q beta subject to sum(beta) = 1, beta >= 0.
class QpProblem {
 public:
  /// Throws Errc::dimension_mismatch for a non-square or empty matrix,
  /// Errc::non_finite_value for NaN or infinity and Errc::non_psd_matrix
  /// when Q is not symmetric within 1e-10.
  explicit QpProblem(Eigen::MatrixXd q);

  Eigen::Index size() const noexcept { return q_.rows(); }
  const Eigen::MatrixXd& q() const noexcept { return q_; }

 private:
  Eigen::MatrixXd q_;
};

struct QpOptions {
  /// 0 means 50 * n.
  int max_iterations = 0;
};

/**
 * KKT point of a QpProblem.
 *
 * Multipliers follow 2 Q beta = lambda u + rho with rho >= 0 and
 * rho_i beta_i = 0; rho is exactly zero off the active set.
 */
struct QpSolution {
  WeightVector beta = WeightVector::uniform(1);
  double lambda = 0.0;
  Eigen::VectorXd rho;
  double objective = 0.0;
  /// Largest violation among stationarity (infinity norm), sum-to-one,
  /// dual feasibility and complementary slackness.
  double kkt_residual = 0.0;
  /// Per-site |2 (Q beta)_i - lambda - rho_i|.
  Eigen::VectorXd stationarity;
  /// Indices pinned at zero, ascending.
  std::vector<Eigen::Index> active_set;
  int iterations = 0;
  /// Diagonal shift added to repair tiny negative eigenvalues, else 0.
  double ridge = 0.0;
};

/**
 * Primal active-set method started from uniform weights.
 *
 * Each iteration minimizes on the face of currently free weights and either
 * steps to it, pinning the first blocking weight at zero, or releases the
 * weight with the most negative multiplier. Ties go to the lowest index.
 * Q with a smallest eigenvalue in [-1e-8 trace, 0) is shifted by
 * 1e-10 trace / n + |lambda_min| first. Throws Errc::non_psd_matrix below
 * that and Errc::max_iterations when the budget runs out.
 */
QpSolution solve_qp(const QpProblem& p, const QpOptions& opts = {});

/// Q = D1.
QpSolution minimize_bias(const MomentSet& m, const QpOptions& opts = {});

/// Q = build_variance_matrix(m, avail).
QpSolution minimize_variance(const MomentSet& m, const AvailabilityModel& avail,
                             const QpOptions& opts = {});

struct MseSolution {
  QpSolution qp;
  /// Full bias and variance estimators re-evaluated at the optimum.
  StatReport report;
};

/// Q = build_variance_matrix(m, avail) + D1.
MseSolution minimize_mse(const MomentSet& m, const AvailabilityModel& avail,
                         const QpOptions& opts = {});

/**
 * Weights with sum_i d2_i beta_i^2 = 0, beta >= 0, sum beta = 1, and
 * d2_i beta_i equal within each sign group.
 *
 * A zero entry gives e_i for the first such i. Otherwise both signs must be
 * present (Errc::infeasible_signs): with H+ = sum_{d>0} 1/d_i and
 * H- = sum_{d<0} 1/|d_i|, positive sites get a / d_i and negative sites
 * b / |d_i| where a = 1 / (H+ + sqrt(H+ H-)) and b = a sqrt(H+ / H-).
 */
WeightVector minimize_missing_bias_closed_form(const Eigen::VectorXd& d2_diag);

struct DirectionalDerivative {
  double first = 0.0;
  double second = 0.0;
};

/**
 * Derivatives of beta' D1 beta at uniform weights along the unit direction
 * dx / |dx| with dx = e_i - u / n (site i zero-based):
 *   first  = (2 / |dx|) ((1/n) u' D1 e_i - (1/n^2) u' D1 u)
 *   second = (2 / |dx|^2) dx' D1 dx
 * Throws Errc::index_out_of_range for a bad i and Errc::invalid_parameter
 * for n = 1, where dx = 0.
 */
DirectionalDerivative bias_directional_derivative(const MomentSet& m, Eigen::Index i);

}  // namespace spatavg
