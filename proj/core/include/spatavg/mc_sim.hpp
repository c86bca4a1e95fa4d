#pragma once

#include "spatavg/data_model.hpp"
#include "spatavg/delta_stats.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace spatavg {

/// What simulate does when a draw leaves no positive-weight site available.
enum class EmptyPatternPolicy { error, resample };

struct SimConfig {
  std::int64_t n_realizations = 5000;
  std::uint64_t seed = 0;
  std::vector<double> alpha_grid;
  EmptyPatternPolicy empty_pattern_policy = EmptyPatternPolicy::resample;
  /// Worker threads; 0 uses the hardware concurrency. Never changes results.
  unsigned threads = 1;
  /// Keep every realization's series in SimResult::trace.
  bool record_trace = false;
  /// Redraws allowed for one time step before resampling gives up.
  int max_resamples = 10000;
};

/// Throws Errc::invalid_parameter on a non-positive ensemble size or an
/// alpha grid value outside (0, 1].
void validate(const SimConfig& cfg);

struct SimResult {
  double sim_bias_sq = 0.0;
  double sim_variance = 0.0;
  Eigen::VectorXd ensemble_mean_series;
  double mc_stderr_bias = 0.0;
  double mc_stderr_var = 0.0;
  /// Time steps redrawn because every positive-weight site was missing.
  std::int64_t resampled_steps = 0;
  /// n_realizations x N when record_trace is set, else empty.
  Eigen::MatrixXd trace;
};

/**
 * Bernoulli availability ensemble of the ratio estimator.
 *
 * Availability is drawn independently per realization, time step and site.
 * sim_variance is the mean over realizations of each series' temporal
 * variance (1/N); sim_bias_sq is the time mean of the squared difference
 * between the ensemble-mean series and the truth.
 *
 * Realization k uses the substream rng::stream_key(seed, k). Realizations
 * are reduced in fixed blocks with compensated summation, so results are
 * bit-identical for any thread count.
 */
SimResult simulate(const ObservationPanel& panel, const TruthSeries& truth,
                   const WeightVector& beta, const AvailabilityModel& avail,
                   const SimConfig& cfg);

/// simulate at every value of cfg.alpha_grid, same seed for each.
std::vector<SimResult> simulate_grid(const ObservationPanel& panel, const TruthSeries& truth,
                                     const WeightVector& beta, const SimConfig& cfg);

inline constexpr Eigen::Index kMaxEnumerationSites = 20;

struct ExactResult {
  /// E[f(t) | some positive-weight site available].
  Eigen::VectorXd mean_series;
  /// Variance of f(t) over availability patterns, per time step.
  Eigen::VectorXd pattern_variance;
  /// Time mean of (mean_series - truth)^2.
  double bias_sq = 0.0;
  /// Expected temporal variance (1/N) of one realization's series:
  /// tempvar(mean_series) + ((N - 1) / N) mean(pattern_variance).
  double variance = 0.0;
  /// tempvar(mean_series) + mean(pattern_variance).
  double total_variance = 0.0;
};

/**
 * Exact statistics by summing over every availability pattern with weight
 * alpha^k (1 - alpha)^(n - k).
 *
 * Patterns with no positive-weight site available are excluded and the
 * remaining mass renormalized. Only positive-weight sites are enumerated.
 * Throws Errc::too_many_sites for n > 20.
 */
ExactResult enumerate_exact(const ObservationPanel& panel, const TruthSeries& truth,
                            const WeightVector& beta, const AvailabilityModel& avail);

/**
 * Exact mean, variance and covariance of R = sum beta_i s_i r_i and
 * S = sum beta_i s_i when t is uniform over the panel's time steps and s
 * ranges over all 2^n patterns, the empty one included.
 */
RSMoments enumerate_rs_moments(const ObservationPanel& panel, const WeightVector& beta,
                               const AvailabilityModel& avail);

}  // namespace spatavg
