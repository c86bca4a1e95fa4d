#include "fixtures.hpp"

#include "spatavg/synthetic.hpp"

#include <cmath>

namespace spatavg::testing {

Fixture random_fixture(std::uint64_t seed, Eigen::Index n, Eigen::Index steps,
                       double sigma_eps) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Eigen::VectorXd mean(n), sd(n), load(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mean[i] = 7.0 + 0.8 * normal(rng);
    sd[i] = 0.5 + unif(rng);
    load[i] = 0.3 + 0.6 * unif(rng);
  }
  Eigen::MatrixXd r(n, steps);
  Eigen::VectorXd truth(steps);
  for (Eigen::Index t = 0; t < steps; ++t) {
    const double common = normal(rng);
    truth[t] = 7.0 + 0.7 * common + 0.1 * normal(rng);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double own = normal(rng);
      r(i, t) = mean[i] +
                sd[i] * (load[i] * common + std::sqrt(1.0 - load[i] * load[i]) * own) +
                sigma_eps * normal(rng);
    }
  }
  return {ObservationPanel(std::move(r)), TruthSeries(std::move(truth)), sigma_eps};
}

Fixture synthetic_fixture(int k) {
  SynthConfig cfg;
  cfg.n_sites = 3 + k % 10;
  cfg.n_steps = 120;
  cfg.corr_length = 0.3;
  cfg.sigma_eps = 0.2;
  cfg.seed = 1000 + static_cast<std::uint64_t>(k);
  cfg.layout = k % 2 == 0 ? SiteLayout::grid : SiteLayout::line;
  SyntheticData d = generate_synthetic(cfg);
  return {std::move(d.panel), std::move(d.truth), cfg.sigma_eps};
}

Fixture standard_fixture() {
  SynthConfig cfg;
  cfg.n_sites = 40;
  cfg.n_steps = 240;
  cfg.corr_length = 0.3;
  cfg.sigma_eps = 0.2;
  cfg.seed = 2024;
  cfg.layout = SiteLayout::grid;
  SyntheticData d = generate_synthetic(cfg);
  return {std::move(d.panel), std::move(d.truth), cfg.sigma_eps};
}

Eigen::VectorXd random_simplex(std::mt19937_64& rng, Eigen::Index n) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) b[i] = expo(rng);
  return b / b.sum();
}

Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> rank_dist(1, n);
  const Eigen::Index k = rank_dist(rng);
  Eigen::MatrixXd a(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = normal(rng);
  }
  Eigen::MatrixXd q = a * a.transpose();
  std::uniform_int_distribution<int> coin(0, 2);
  if (coin(rng) != 0) q.diagonal().array() += 0.05;
  return 0.5 * (q + q.transpose());
}

}  // namespace spatavg::testing
