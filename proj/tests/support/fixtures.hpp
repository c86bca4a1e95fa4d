#pragma once

#include "spatavg/data_model.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace spatavg::testing {

struct Fixture {
  ObservationPanel panel;
  TruthSeries truth;
  double sigma_eps = 0.0;
};

/// Panel with one common factor plus site noise, means near 7, drawn with
/// std::mt19937_64 so it shares no code with the library generator.
Fixture random_fixture(std::uint64_t seed, Eigen::Index n, Eigen::Index steps,
                       double sigma_eps = 0.0);

/// Member k of the synthetic set used by the oracle checks: n = 3 + k % 10
/// sites, 120 steps, corr_length 0.3, sigma_eps 0.2.
Fixture synthetic_fixture(int k);

/// Rainfall-like 2-D fixture used for optimizer properties.
Fixture standard_fixture();

/// Uniform draw from the probability simplex.
Eigen::VectorXd random_simplex(std::mt19937_64& rng, Eigen::Index n);

/// A A' (+ delta I) with random rank; delta is 0 for about a third of draws.
Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index n);

}  // namespace spatavg::testing
