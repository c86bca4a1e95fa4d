#include "spatavg/delta_stats.hpp"

#include "spatavg/error.hpp"
#include "spatavg/linalg.hpp"

#include <cmath>
#include <limits>

namespace spatavg {

namespace {

void check_sizes(const MomentSet& m, const WeightVector& beta) {
  if (beta.size() != m.size()) {
    fail(Errc::dimension_mismatch, "weights have " + std::to_string(beta.size()) +
                                       " entries but moments cover " +
                                       std::to_string(m.size()) + " locations");
  }
}

}  // namespace

RSMoments rs_moments(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail) {
  check_sizes(m, beta);
  const double a = avail.alpha();
  const Eigen::VectorXd& b = beta.values();
  const Eigen::VectorXd b2 = b.cwiseAbs2();
  const double sum_b2 = b2.sum();

  RSMoments rs;
  rs.mu_S = a;
  rs.mu_R = a * b.dot(m.mean_obs);
  rs.var_R = a * b2.dot(m.zeta_sq_at(a)) + a * a * linalg::off_diagonal_quad(m.cov_obs, b) +
             a * m.sigma_eps_sq * sum_b2;
  rs.var_S = a * (1.0 - a) * sum_b2;
  rs.cov_RS = a * (1.0 - a) * b2.dot(m.mean_obs);
  return rs;
}

BiasTerms delta_bias(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail) {
  check_sizes(m, beta);
  const Eigen::VectorXd& b = beta.values();
  const Eigen::VectorXd b2 = b.cwiseAbs2();
  const double mu_v = b.dot(m.mean_obs);
  const double shift = avail.missing_ratio() * (mu_v * b2.sum() - b2.dot(m.mean_obs));

  BiasTerms out;
  out.term_sampling = linalg::quad(m.d1, b);
  out.term_missing = shift * shift;
  out.cross = 2.0 * shift * b.dot(m.d2_diag);
  // Mean of (a_t + c)^2 is nonnegative; only rounding can push it below.
  out.bias_sq = std::max(0.0, out.term_sampling + out.cross + out.term_missing);
  return out;
}

double delta_variance(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail) {
  check_sizes(m, beta);
  const double a = avail.alpha();
  const double ratio = avail.missing_ratio();
  const Eigen::VectorXd& b = beta.values();
  const Eigen::VectorXd b2 = b.cwiseAbs2();
  const double sum_b2 = b2.sum();
  const double mu_v = b.dot(m.mean_obs);

  const double terms[] = {
      b2.dot(m.zeta_sq_at(a)) / a,
      linalg::off_diagonal_quad(m.cov_obs, b),
      m.sigma_eps_sq * sum_b2 / a,
      -2.0 * ratio * mu_v * b2.dot(m.mean_obs),
      ratio * mu_v * mu_v * sum_b2,
  };
  double v = 0.0;
  double scale = 0.0;
  for (double t : terms) {
    v += t;
    scale += std::abs(t);
  }
  if (v < -1e-9 * scale) {
    fail(Errc::negative_variance,
         "delta variance is negative (" + std::to_string(v) + "); moments are inconsistent");
  }
  return std::max(0.0, v);
}

double delta_variance_from_rs(const RSMoments& rs) {
  const double s = rs.mu_S;
  return rs.var_R / (s * s) + rs.mu_R * rs.mu_R * rs.var_S / (s * s * s * s) -
         2.0 * rs.mu_R * rs.cov_RS / (s * s * s);
}

StatReport mse_and_se(double bias_sq, double variance, const MomentSet& m,
                      const WeightVector& beta) {
  check_sizes(m, beta);
  if (!(bias_sq >= 0.0) || !(variance >= 0.0)) {
    fail(Errc::invalid_parameter, "bias and variance must be nonnegative");
  }
  const Eigen::VectorXd& b = beta.values();
  StatReport r;
  r.bias_sq = bias_sq;
  r.variance = variance;
  r.mse = bias_sq + variance;
  r.se = std::sqrt(std::max(0.0, linalg::quad(m.d1, b) + m.sigma_eps_sq * b.squaredNorm()));
  return r;
}

double validity_diagnostic(const RSMoments& rs) {
  if (rs.mu_R == 0.0) {
    fail(Errc::undefined_diagnostic, "validity ratio is undefined when mu_R = 0");
  }
  return std::abs(rs.var_S / (rs.mu_S * rs.mu_S) - rs.cov_RS / (rs.mu_R * rs.mu_S));
}

StatReport evaluate_report(const MomentSet& m, const WeightVector& beta,
                           const AvailabilityModel& avail) {
  const BiasTerms bias = delta_bias(m, beta, avail);
  StatReport r = mse_and_se(bias.bias_sq, delta_variance(m, beta, avail), m, beta);
  r.bias_term_sampling = bias.term_sampling;
  r.bias_term_missing = bias.term_missing;
  const RSMoments rs = rs_moments(m, beta, avail);
  r.validity_ratio =
      rs.mu_R == 0.0 ? std::numeric_limits<double>::quiet_NaN() : validity_diagnostic(rs);
  return r;
}

}  // namespace spatavg
