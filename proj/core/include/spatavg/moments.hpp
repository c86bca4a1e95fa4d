#pragma once

#include "spatavg/data_model.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <iosfwd>

namespace spatavg {

/**
 * Moment matrices of the observed field consumed by the delta estimators
 * and the weight optimizers.
 *
 * Every temporal moment is taken over the empirical distribution of the N
 * time steps (1/N normalization), so cov_obs, d1 and zeta_sq are mutually
 * consistent and the no-missing-data variance is exactly beta' cov_obs beta.
 */
struct MomentSet {
  Eigen::Index n_steps = 0;
  Eigen::VectorXd mean_obs;       ///< E r_i = E v_i
  Eigen::VectorXd second_moment;  ///< E r_i^2
  Eigen::MatrixXd cov_obs;        ///< S_r
  Eigen::MatrixXd d1;             ///< (1/N) sum_t d(t) d(t)', d_i(t) = r_i(t) - v(t)
  Eigen::VectorXd d2_diag;        ///< E v_i - E v
  Eigen::VectorXd f_diag;         ///< (E v_i - E v)^2
  Eigen::VectorXd zeta_sq;        ///< E v_i^2 - alpha (E v_i)^2 at `alpha`
  double alpha = 1.0;
  double mean_truth = 0.0;        ///< E v
  double sigma_eps_sq = 0.0;

  Eigen::Index size() const noexcept { return mean_obs.size(); }

  /// zeta^2 re-evaluated at another availability: E r^2 - sigma_eps^2 - alpha (E r)^2.
  Eigen::VectorXd zeta_sq_at(double other_alpha) const;
};

MomentSet estimate_moments(const ObservationPanel& panel, const TruthSeries& truth,
                           const NoiseModel& noise, const AvailabilityModel& avail);

/// Throws unless sizes agree, cov_obs and d1 are symmetric PSD and f = d2^2.
void check_moment_invariants(const MomentSet& m);

/**
 * Quadratic variance kernel C = S_r / alpha + ((1 - alpha) / alpha) F, with
 * F = diag((E v_i - mu_upsilon)^2).
 */
Eigen::MatrixXd build_variance_matrix(const MomentSet& m, const AvailabilityModel& avail,
                                      double mu_upsilon);

/// Same with mu_upsilon = E v, the small-sampling-bias limit.
Eigen::MatrixXd build_variance_matrix(const MomentSet& m, const AvailabilityModel& avail);

// Summary file: "key = value" lines, '#' comments. Vectors are space
// separated on one line; matrices use one key per row ("cov_obs.0", ...).
// Keys: format, n, steps, alpha, sigma_eps_sq, mean_truth, location_ids,
// lat, lon (optional), mean_obs, second_moment, zeta_sq, d2_diag, f_diag,
// cov_obs.<row>, d1.<row>.
struct StoredMoments {
  MomentSet moments;
  SiteInfo sites;
};

void write_moments(std::ostream& out, const MomentSet& m, const SiteInfo& sites);
/// Parses and validates a summary file (check_moment_invariants).
StoredMoments read_moments(std::istream& in);
StoredMoments read_moments(const std::filesystem::path& path);

}  // namespace spatavg
