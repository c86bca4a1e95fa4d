#pragma once

#include "spatavg/data_model.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace spatavg {

enum class SiteLayout { line, grid };

struct SynthConfig {
  Eigen::Index n_sites = 12;
  Eigen::Index n_steps = 120;
  /// Length of the exp(-d / L) correlation on the unit interval or square;
  /// 0 makes grid points independent.
  double corr_length = 0.3;
  double sigma_eps = 0.0;
  /// Climatological mean is 7 (1 + mean_contrast shape(x, y)) with shape in [-1, 1].
  double mean_contrast = 0.4;
  /// Point standard deviation as a fraction of the local mean.
  double coeff_variation = 0.15;
  std::uint64_t seed = 1;
  SiteLayout layout = SiteLayout::grid;
};

struct SyntheticData {
  ObservationPanel panel;
  /// Dense-field area average per step.
  TruthSeries truth;
  /// Noise-free field at the sites, n x N.
  Eigen::MatrixXd field;
};

/**
 * Gaussian field on a dense grid with exponential spatial correlation, a
 * smooth mean near 7 and a standard deviation proportional to the mean,
 * sampled at a seeded random subset of grid points with additive noise.
 *
 * The dense grid has max(64, 4n) points on a line or a side of
 * max(12, ceil(sqrt(4n))) on the square. Coordinates map to latitude
 * 8 + 27 y and longitude 68 + 29 x. Output depends only on the config.
 * Throws Errc::invalid_parameter for n < 1, N < 2, a negative or
 * non-finite corr_length or sigma_eps, mean_contrast outside [0, 1) and
 * a negative coeff_variation.
 */
SyntheticData generate_synthetic(const SynthConfig& cfg);

}  // namespace spatavg
