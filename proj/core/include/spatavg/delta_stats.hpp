#pragma once

#include "spatavg/data_model.hpp"
#include "spatavg/moments.hpp"

namespace spatavg {

/// First two moments of numerator R = sum beta_i s_i r_i and denominator
/// S = sum beta_i s_i of the ratio estimator.
struct RSMoments {
  double mu_R = 0.0;
  double mu_S = 0.0;
  double var_R = 0.0;
  double var_S = 0.0;
  double cov_RS = 0.0;
};

/// Squared bias with its two sources kept apart.
///
/// bias_sq = term_sampling + cross + term_missing, where term_sampling is
/// the finite-sampling part beta' D1 beta and term_missing is the squared
/// constant missing-data shift.
struct BiasTerms {
  double bias_sq = 0.0;
  double term_sampling = 0.0;
  double term_missing = 0.0;
  double cross = 0.0;
};

struct StatReport {
  double bias_sq = 0.0;
  double variance = 0.0;
  double mse = 0.0;
  double se = 0.0;
  double validity_ratio = 0.0;  ///< NaN when mu_R = 0
  double bias_term_sampling = 0.0;
  double bias_term_missing = 0.0;
};

/// Warn above this validity ratio: the first-order variance truncation is
/// then unreliable.
inline constexpr double kValidityThreshold = 0.05;

RSMoments rs_moments(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail);

/**
 * Delta-method squared bias.
 *
 * The per-step error is e(t) = sum_i beta_i r_i(t) - v(t) + c with the
 * constant missing-data shift
 *   c = ((1 - alpha) / alpha) (mu_v sum beta_i^2 - sum beta_i^2 E v_i),
 * mu_v = sum beta_i E v_i. The time average of e(t)^2 is assembled from the
 * moment set as beta' D1 beta + 2 c beta' d2 + c^2, so no panel is needed.
 */
BiasTerms delta_bias(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail);

/**
 * Delta-method variance, expanded in terms of the field moments:
 *
 *   V = (1/a) sum b_i^2 zeta_i^2 + sum_{i!=j} b_i b_j Cov_ij
 *     + (1/a) s_eps^2 sum b_i^2
 *     - 2 ((1-a)/a) mu_v sum b_i^2 E v_i + ((1-a)/a) mu_v^2 sum b_i^2
 *
 * Throws Errc::negative_variance when the result is below -1e-9 times the
 * magnitude of its terms; smaller negative rounding is returned as 0.
 */
double delta_variance(const MomentSet& m, const WeightVector& beta, const AvailabilityModel& avail);

/// Same quantity assembled from R and S moments:
/// var_R / mu_S^2 + mu_R^2 var_S / mu_S^4 - 2 mu_R cov_RS / mu_S^3.
double delta_variance_from_rs(const RSMoments& rs);

/// MSE and standard error sqrt(beta' (D1 + s_eps^2 I) beta).
StatReport mse_and_se(double bias_sq, double variance, const MomentSet& m,
                      const WeightVector& beta);

/// |var_S / mu_S^2 - cov_RS / (mu_R mu_S)|; throws Errc::undefined_diagnostic
/// when mu_R = 0.
double validity_diagnostic(const RSMoments& rs);

/// Bias, variance, MSE, SE, validity ratio and bias terms in one pass.
StatReport evaluate_report(const MomentSet& m, const WeightVector& beta,
                           const AvailabilityModel& avail);

}  // namespace spatavg
