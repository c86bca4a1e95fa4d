#include "spatavg/oa_solver.hpp"

#include "spatavg/error.hpp"
#include "spatavg/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace spatavg {

QpProblem::QpProblem(Eigen::MatrixXd q) : q_(std::move(q)) {
  if (q_.rows() == 0 || q_.rows() != q_.cols()) {
    fail(Errc::dimension_mismatch, "QP matrix must be square and non-empty");
  }
  if (!q_.allFinite()) fail(Errc::non_finite_value, "QP matrix contains a non-finite value");
  if (!linalg::is_symmetric(q_)) fail(Errc::non_psd_matrix, "QP matrix is not symmetric");
  q_ = 0.5 * (q_ + q_.transpose()).eval();
}

namespace {

using Index = Eigen::Index;

// Minimizer direction on the free set F: p with p_A = 0, sum p_F = 0 and
// 2 Q_FF p_F + g_F = mu u_F.
Eigen::VectorXd face_step(const Eigen::MatrixXd& q, const Eigen::VectorXd& beta,
                          const std::vector<Index>& free) {
  const auto nf = static_cast<Index>(free.size());
  Eigen::MatrixXd qff(nf, nf);
  Eigen::VectorXd beta_f(nf);
  for (Index a = 0; a < nf; ++a) {
    beta_f[a] = beta[free[a]];
    for (Index b = 0; b < nf; ++b) qff(a, b) = q(free[a], free[b]);
  }

  Eigen::VectorXd p_f;
  const Eigen::LLT<Eigen::MatrixXd> llt(qff);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-12) {
    // Face optimum Q_FF^{-1} u / (u' Q_FF^{-1} u).
    const Eigen::VectorXd w = llt.solve(Eigen::VectorXd::Ones(nf));
    p_f = w / w.sum() - beta_f;
  } else {
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nf + 1, nf + 1);
    k.topLeftCorner(nf, nf) = 2.0 * qff;
    k.topRightCorner(nf, 1).setOnes();
    k.bottomLeftCorner(1, nf).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + 1);
    rhs.head(nf) = -2.0 * qff * beta_f;
    const Eigen::VectorXd sol = k.completeOrthogonalDecomposition().solve(rhs);
    p_f = sol.head(nf);
    p_f.array() -= p_f.mean();
  }

  Eigen::VectorXd p = Eigen::VectorXd::Zero(beta.size());
  for (Index a = 0; a < nf; ++a) p[free[a]] = p_f[a];
  return p;
}

struct Multipliers {
  double lambda;
  Eigen::VectorXd rho;
};

Multipliers multipliers(const Eigen::VectorXd& g, const std::vector<bool>& is_free) {
  double sum = 0.0;
  int count = 0;
  for (Index i = 0; i < g.size(); ++i) {
    if (is_free[static_cast<std::size_t>(i)]) {
      sum += g[i];
      ++count;
    }
  }
  Multipliers out{sum / count, Eigen::VectorXd::Zero(g.size())};
  for (Index i = 0; i < g.size(); ++i) {
    if (!is_free[static_cast<std::size_t>(i)]) out.rho[i] = g[i] - out.lambda;
  }
  return out;
}

double ridge_for(const Eigen::MatrixXd& q) {
  const Index n = q.rows();
  const double trace = q.trace();
  const double lmin = linalg::min_eigenvalue(q);
  if (lmin >= 0.0) return 0.0;
  if (lmin < -linalg::kPsdTraceTolerance * std::abs(trace)) {
    fail(Errc::non_psd_matrix, "QP matrix has eigenvalue " + std::to_string(lmin) +
                                   " below tolerance");
  }
  return 1e-10 * std::abs(trace) / static_cast<double>(n) - lmin;
}

}  // namespace

QpSolution solve_qp(const QpProblem& problem, const QpOptions& opts) {
  const Index n = problem.size();
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 50 * static_cast<int>(n);

  QpSolution sol;
  sol.ridge = ridge_for(problem.q());
  Eigen::MatrixXd q = problem.q();
  if (sol.ridge > 0.0) q.diagonal().array() += sol.ridge;

  const double scale = std::max(2.0 * q.cwiseAbs().rowwise().sum().maxCoeff(),
                                std::numeric_limits<double>::min());
  const double release_tol = 1e-12 * scale;

  Eigen::VectorXd beta = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<bool> is_free(static_cast<std::size_t>(n), true);
  Multipliers mult{0.0, Eigen::VectorXd::Zero(n)};

  bool converged = false;
  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    std::vector<Index> free;
    for (Index i = 0; i < n; ++i) {
      if (is_free[static_cast<std::size_t>(i)]) free.push_back(i);
    }
    const Eigen::VectorXd p = face_step(q, beta, free);

    double step = 1.0;
    Index blocking = -1;
    for (Index i : free) {
      if (p[i] < 0.0) {
        const double t = beta[i] / -p[i];
        if (t < step) {
          step = t;
          blocking = i;
        }
      }
    }
    beta += step * p;
    if (blocking >= 0) {
      beta[blocking] = 0.0;
      is_free[static_cast<std::size_t>(blocking)] = false;
      continue;
    }
    for (Index i : free) beta[i] = std::max(beta[i], 0.0);

    mult = multipliers(2.0 * q * beta, is_free);
    Index release = -1;
    double most_negative = -release_tol;
    for (Index i = 0; i < n; ++i) {
      if (!is_free[static_cast<std::size_t>(i)] && mult.rho[i] < most_negative) {
        most_negative = mult.rho[i];
        release = i;
      }
    }
    if (release < 0) {
      converged = true;
      break;
    }
    is_free[static_cast<std::size_t>(release)] = true;
  }
  if (!converged) {
    fail(Errc::max_iterations, "active-set method did not converge in " +
                                   std::to_string(max_iter) + " iterations");
  }

  beta /= beta.sum();
  mult = multipliers(2.0 * q * beta, is_free);
  // Multipliers within the release tolerance of zero are rounding noise.
  mult.rho = mult.rho.cwiseMax(0.0);

  sol.beta = WeightVector(beta);
  sol.lambda = mult.lambda;
  sol.rho = mult.rho;
  sol.objective = linalg::quad(problem.q(), sol.beta.values());
  sol.iterations = iter;
  for (Index i = 0; i < n; ++i) {
    if (!is_free[static_cast<std::size_t>(i)]) sol.active_set.push_back(i);
  }
  const Eigen::VectorXd& b = sol.beta.values();
  const Eigen::VectorXd stationarity =
      2.0 * q * b - sol.lambda * Eigen::VectorXd::Ones(n) - sol.rho;
  sol.stationarity = stationarity.cwiseAbs();
  sol.kkt_residual = std::max({sol.stationarity.maxCoeff(), std::abs(b.sum() - 1.0),
                               std::max(0.0, -sol.rho.minCoeff()),
                               sol.rho.cwiseProduct(b).cwiseAbs().maxCoeff()});
  return sol;
}

QpSolution minimize_bias(const MomentSet& m, const QpOptions& opts) {
  return solve_qp(QpProblem(m.d1), opts);
}

QpSolution minimize_variance(const MomentSet& m, const AvailabilityModel& avail,
                             const QpOptions& opts) {
  return solve_qp(QpProblem(build_variance_matrix(m, avail)), opts);
}

MseSolution minimize_mse(const MomentSet& m, const AvailabilityModel& avail,
                         const QpOptions& opts) {
  MseSolution out;
  out.qp = solve_qp(QpProblem(build_variance_matrix(m, avail) + m.d1), opts);
  out.report = evaluate_report(m, out.qp.beta, avail);
  return out;
}

WeightVector minimize_missing_bias_closed_form(const Eigen::VectorXd& d2) {
  const Index n = d2.size();
  if (n == 0) fail(Errc::dimension_mismatch, "d2_diag is empty");
  if (!d2.allFinite()) fail(Errc::non_finite_value, "d2_diag contains a non-finite value");
  for (Index i = 0; i < n; ++i) {
    if (d2[i] == 0.0) return WeightVector::unit(n, i);
  }
  double h_plus = 0.0;
  double h_minus = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (d2[i] > 0.0) {
      h_plus += 1.0 / d2[i];
    } else {
      h_minus += 1.0 / -d2[i];
    }
  }
  if (h_plus == 0.0 || h_minus == 0.0) {
    fail(Errc::infeasible_signs,
         "d2_diag entries all share one sign; no nonnegative weights zero the missing-data bias");
  }
  const double a = 1.0 / (h_plus + std::sqrt(h_plus * h_minus));
  const double b = a * std::sqrt(h_plus / h_minus);
  Eigen::VectorXd beta(n);
  for (Index i = 0; i < n; ++i) beta[i] = d2[i] > 0.0 ? a / d2[i] : b / -d2[i];
  return WeightVector(beta);
}

DirectionalDerivative bias_directional_derivative(const MomentSet& m, Eigen::Index i) {
  const Index n = m.size();
  if (i < 0 || i >= n) {
    fail(Errc::index_out_of_range,
         "site index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
  }
  if (n == 1) fail(Errc::invalid_parameter, "no direction away from uniform weights when n = 1");
  const auto nd = static_cast<double>(n);
  const double norm = std::sqrt((nd - 1.0) / nd);
  const double col_sum = m.d1.col(i).sum();
  const double total = m.d1.sum();
  Eigen::VectorXd dx = Eigen::VectorXd::Constant(n, -1.0 / nd);
  dx[i] += 1.0;
  DirectionalDerivative out;
  out.first = 2.0 / norm * (col_sum / nd - total / (nd * nd));
  out.second = 2.0 / (norm * norm) * linalg::quad(m.d1, dx);
  return out;
}

}  // namespace spatavg
