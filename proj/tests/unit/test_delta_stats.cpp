#include "spatavg/delta_stats.hpp"
#include "spatavg/error.hpp"
#include "spatavg/linalg.hpp"
#include "spatavg/mc_sim.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace spatavg {
namespace {

using testing::random_fixture;

MomentSet moments_of(const testing::Fixture& fx, double alpha = 1.0) {
  return estimate_moments(fx.panel, fx.truth, NoiseModel(fx.sigma_eps), AvailabilityModel(alpha));
}

TEST(DeltaStats, FullAvailabilityReducesToQuadraticForms) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 5; ++k) {
    const auto fx = random_fixture(100 + k, 5 + k, 60, 0.25);
    const MomentSet m = moments_of(fx);
    const WeightVector w(testing::random_simplex(rng, m.size()));
    const AvailabilityModel full(1.0);
    const double bias = linalg::quad(testing::loop_d1(fx.panel, fx.truth), w.values());
    const double var = linalg::quad(testing::loop_covariance(fx.panel), w.values());
    EXPECT_NEAR(delta_bias(m, w, full).bias_sq, bias, 1e-10 * bias);
    EXPECT_NEAR(delta_variance(m, w, full), var, 1e-10 * var);
    EXPECT_EQ(delta_bias(m, w, full).term_missing, 0.0);
  }
}

TEST(DeltaStats, BiasMatchesPerTimeOracle) {
  std::mt19937_64 rng(22);
  const auto fx = random_fixture(23, 8, 80, 0.1);
  const MomentSet m = moments_of(fx);
  for (double alpha : {0.2, 0.5, 0.9}) {
    const WeightVector w(testing::random_simplex(rng, m.size()));
    const double oracle = testing::per_time_bias_sq(fx.panel, fx.truth, w.values(), alpha);
    const BiasTerms b = delta_bias(m, w, AvailabilityModel(alpha));
    EXPECT_NEAR(b.bias_sq, oracle, 1e-10 * oracle) << alpha;
    EXPECT_NEAR(b.bias_sq, b.term_sampling + b.cross + b.term_missing, 1e-12);
  }
}

TEST(DeltaStats, UniformWeightsHaveNoMissingDataShift) {
  const auto fx = random_fixture(24, 6, 50);
  const MomentSet m = moments_of(fx);
  const BiasTerms b = delta_bias(m, WeightVector::uniform(6), AvailabilityModel(0.3));
  EXPECT_LT(b.term_missing, 1e-28);
  EXPECT_NEAR(b.bias_sq, b.term_sampling, 1e-12);
}

TEST(DeltaStats, TwoVarianceAssembliesAgree) {
  std::mt19937_64 rng(25);
  const auto fx = random_fixture(26, 7, 90, 0.3);
  const MomentSet m = moments_of(fx, 0.4);
  for (double alpha : {0.1, 0.35, 0.8, 1.0}) {
    const WeightVector w(testing::random_simplex(rng, m.size()));
    const AvailabilityModel av(alpha);
    const double direct = delta_variance(m, w, av);
    const double via_rs = delta_variance_from_rs(rs_moments(m, w, av));
    EXPECT_NEAR(direct, via_rs, 1e-11 * direct) << alpha;
  }
}

TEST(DeltaStats, RsMomentsMatchEnumeration) {
  std::mt19937_64 rng(27);
  for (int k = 0; k < 3; ++k) {
    const auto fx = random_fixture(28 + k, 3 + 2 * k, 40, 0.2);
    const MomentSet m = moments_of(fx);
    const WeightVector w(testing::random_simplex(rng, m.size()));
    for (double alpha : {0.3, 0.75}) {
      const AvailabilityModel av(alpha);
      const RSMoments f = rs_moments(m, w, av);
      const RSMoments e = enumerate_rs_moments(fx.panel, w, av);
      EXPECT_NEAR(f.mu_R, e.mu_R, 1e-10 * std::abs(e.mu_R));
      EXPECT_NEAR(f.mu_S, e.mu_S, 1e-12);
      EXPECT_NEAR(f.var_R, e.var_R, 1e-10 * e.var_R);
      EXPECT_NEAR(f.var_S, e.var_S, 1e-12);
      EXPECT_NEAR(f.cov_RS, e.cov_RS, 1e-10 * std::abs(e.cov_RS) + 1e-14);
    }
  }
}

TEST(DeltaStats, VarianceIsNonincreasingInAvailability) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 10; ++k) {
    const auto fx = random_fixture(300 + k, 4 + k, 60, 0.1 * k);
    const MomentSet m = moments_of(fx);
    const WeightVector w(testing::random_simplex(rng, m.size()));
    double previous = delta_variance(m, w, AvailabilityModel(0.05));
    for (int step = 2; step <= 20; ++step) {
      const double v = delta_variance(m, w, AvailabilityModel(0.05 * step));
      EXPECT_LE(v, previous * (1.0 + 1e-12)) << k << " " << step;
      previous = v;
    }
  }
}

TEST(DeltaStats, StandardErrorFormula) {
  const auto fx = random_fixture(31, 5, 40, 0.5);
  const MomentSet m = moments_of(fx);
  const WeightVector w = WeightVector::uniform(5);
  const StatReport r = mse_and_se(0.2, 0.3, m, w);
  EXPECT_DOUBLE_EQ(r.mse, 0.5);
  const double expected =
      std::sqrt(linalg::quad(m.d1, w.values()) + 0.25 * w.values().squaredNorm());
  EXPECT_NEAR(r.se, expected, 1e-14);
  EXPECT_THROW((void)mse_and_se(-1.0, 0.3, m, w), Error);
}

TEST(DeltaStats, ValidityDiagnostic) {
  RSMoments rs{2.0, 0.5, 1.0, 0.1, 0.3};
  EXPECT_DOUBLE_EQ(validity_diagnostic(rs), std::abs(0.1 / 0.25 - 0.3 / 1.0));
  rs.mu_R = 0.0;
  try {
    (void)validity_diagnostic(rs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::undefined_diagnostic);
  }
}

TEST(DeltaStats, ReportMarksUndefinedValidityAsNan) {
  // Zero-mean field at the only weighted site: mu_R = 0.
  Eigen::MatrixXd r(2, 4);
  r << 1, -1, 1, -1, 3, 4, 5, 6;
  const ObservationPanel panel(r);
  const TruthSeries truth(Eigen::VectorXd::Zero(4));
  const MomentSet m = estimate_moments(panel, truth, NoiseModel(), AvailabilityModel(1.0));
  const StatReport rep = evaluate_report(m, WeightVector::unit(2, 0), AvailabilityModel(0.5));
  EXPECT_TRUE(std::isnan(rep.validity_ratio));
  EXPECT_GT(rep.variance, 0.0);
}

TEST(DeltaStats, InconsistentMomentsRaiseNegativeVariance) {
  const auto fx = random_fixture(32, 3, 30);
  MomentSet m = moments_of(fx);
  m.second_moment.setZero();
  try {
    (void)delta_variance(m, WeightVector::uniform(3), AvailabilityModel(0.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::negative_variance);
  }
}

TEST(DeltaStats, RejectsWeightsOfWrongLength) {
  const auto fx = random_fixture(33, 3, 30);
  const MomentSet m = moments_of(fx);
  EXPECT_THROW((void)delta_bias(m, WeightVector::uniform(4), AvailabilityModel(1.0)), Error);
  EXPECT_THROW((void)delta_variance(m, WeightVector::uniform(2), AvailabilityModel(1.0)), Error);
}

}  // namespace
}  // namespace spatavg
