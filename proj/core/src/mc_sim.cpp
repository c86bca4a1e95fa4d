#include "spatavg/mc_sim.hpp"

#include "spatavg/error.hpp"
#include "spatavg/rng.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <thread>

namespace spatavg {

namespace {

constexpr std::int64_t kBlockSize = 64;

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

double temporal_variance(const Eigen::VectorXd& x) {
  const double mean = x.mean();
  return (x.array() - mean).square().mean();
}

// Partial sums of one block of realizations.
struct BlockSums {
  Eigen::VectorXd f_sum;     // per step, sum of f
  Eigen::VectorXd f_sq_sum;  // per step, sum of (f - shift)^2
  std::vector<double> variances;  // temporal variance per realization
  std::int64_t resampled = 0;
};

struct Problem {
  const Eigen::MatrixXd* r;
  std::vector<Eigen::Index> sites;  // positive-weight sites
  std::vector<double> weights;      // their weights
  Eigen::Index n = 0;               // all sites, drawn even at zero weight
  Eigen::Index steps = 0;
  double alpha = 1.0;
  Eigen::VectorXd shift;            // per-step centering for second moments
};

void run_realization(const Problem& p, const SimConfig& cfg, std::int64_t index,
                     Eigen::VectorXd& series, std::int64_t& resampled) {
  rng::Stream stream(rng::stream_key(cfg.seed, static_cast<std::uint64_t>(index)));
  std::vector<std::uint8_t> avail(static_cast<std::size_t>(p.n));
  for (Eigen::Index t = 0; t < p.steps; ++t) {
    for (int attempt = 0;; ++attempt) {
      for (auto& s : avail) s = stream.uniform() < p.alpha ? 1 : 0;
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < p.sites.size(); ++k) {
        const Eigen::Index i = p.sites[k];
        if (avail[static_cast<std::size_t>(i)] != 0) {
          num += p.weights[k] * (*p.r)(i, t);
          den += p.weights[k];
        }
      }
      if (den > 0.0) {
        series[t] = num / den;
        break;
      }
      if (cfg.empty_pattern_policy == EmptyPatternPolicy::error) {
        fail(Errc::all_missing_pattern, "realization " + std::to_string(index) + ", step " +
                                            std::to_string(t) +
                                            ": no positive-weight site available");
      }
      if (attempt + 1 >= cfg.max_resamples) {
        fail(Errc::all_missing_pattern, "gave up after " + std::to_string(cfg.max_resamples) +
                                            " redraws of an all-missing pattern");
      }
      ++resampled;
    }
  }
}

BlockSums run_block(const Problem& p, const SimConfig& cfg, std::int64_t block,
                    Eigen::MatrixXd* trace) {
  BlockSums out;
  out.f_sum = Eigen::VectorXd::Zero(p.steps);
  out.f_sq_sum = Eigen::VectorXd::Zero(p.steps);
  Eigen::VectorXd series(p.steps);
  const std::int64_t first = block * kBlockSize;
  const std::int64_t last = std::min(first + kBlockSize, cfg.n_realizations);
  for (std::int64_t k = first; k < last; ++k) {
    run_realization(p, cfg, k, series, out.resampled);
    out.f_sum += series;
    out.f_sq_sum += (series - p.shift).cwiseAbs2();
    out.variances.push_back(temporal_variance(series));
    if (trace != nullptr) trace->row(k) = series.transpose();
  }
  return out;
}

unsigned worker_count(const SimConfig& cfg, std::int64_t blocks) {
  unsigned threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = std::max(1U, threads);
  return static_cast<unsigned>(std::min<std::int64_t>(threads, blocks));
}

void check_inputs(const ObservationPanel& panel, const TruthSeries& truth,
                  const WeightVector& beta) {
  validate_panel(panel, truth);
  if (beta.size() != panel.n_sites()) {
    fail(Errc::dimension_mismatch, "weights have " + std::to_string(beta.size()) +
                                       " entries but the panel has " +
                                       std::to_string(panel.n_sites()) + " locations");
  }
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (cfg.n_realizations < 1) fail(Errc::invalid_parameter, "n_realizations must be >= 1");
  if (cfg.max_resamples < 1) fail(Errc::invalid_parameter, "max_resamples must be >= 1");
  for (double a : cfg.alpha_grid) (void)AvailabilityModel{a};
}

SimResult simulate(const ObservationPanel& panel, const TruthSeries& truth,
                   const WeightVector& beta, const AvailabilityModel& avail,
                   const SimConfig& cfg) {
  validate(cfg);
  check_inputs(panel, truth, beta);

  Problem p;
  p.r = &panel.values();
  p.n = panel.n_sites();
  p.steps = panel.n_steps();
  p.alpha = avail.alpha();
  for (Eigen::Index i = 0; i < p.n; ++i) {
    if (beta[i] > 0.0) {
      p.sites.push_back(i);
      p.weights.push_back(beta[i]);
    }
  }
  p.shift = panel.values().transpose() * beta.values();

  const std::int64_t m = cfg.n_realizations;
  const std::int64_t blocks = (m + kBlockSize - 1) / kBlockSize;
  SimResult result;
  if (cfg.record_trace) result.trace.resize(m, p.steps);
  Eigen::MatrixXd* trace = cfg.record_trace ? &result.trace : nullptr;

  std::vector<BlockSums> sums(static_cast<std::size_t>(blocks));
  std::atomic<std::int64_t> next_block{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    try {
      for (std::int64_t b = next_block++; b < blocks && !failed; b = next_block++) {
        sums[static_cast<std::size_t>(b)] = run_block(p, cfg, b, trace);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  const unsigned workers = worker_count(cfg, blocks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CompensatedSum> f_acc(static_cast<std::size_t>(p.steps));
  std::vector<CompensatedSum> f_sq_acc(static_cast<std::size_t>(p.steps));
  CompensatedSum var_acc;
  for (const BlockSums& b : sums) {
    for (Eigen::Index t = 0; t < p.steps; ++t) {
      f_acc[static_cast<std::size_t>(t)].add(b.f_sum[t]);
      f_sq_acc[static_cast<std::size_t>(t)].add(b.f_sq_sum[t]);
    }
    for (double v : b.variances) var_acc.add(v);
    result.resampled_steps += b.resampled;
  }

  const auto md = static_cast<double>(m);
  const auto nd = static_cast<double>(p.steps);
  result.ensemble_mean_series.resize(p.steps);
  double bias_acc = 0.0;
  double stderr_acc = 0.0;
  for (Eigen::Index t = 0; t < p.steps; ++t) {
    const double mean = f_acc[static_cast<std::size_t>(t)].value() / md;
    result.ensemble_mean_series[t] = mean;
    const double b = mean - truth[t];
    bias_acc += b * b;
    // Sample variance across realizations from moments about the shift.
    double v_hat = 0.0;
    if (m > 1) {
      const double d = mean - p.shift[t];
      v_hat = std::max(0.0, (f_sq_acc[static_cast<std::size_t>(t)].value() - md * d * d) /
                                (md - 1.0));
    }
    stderr_acc += 4.0 * b * b * v_hat / md + 2.0 * v_hat * v_hat / (md * md);
  }
  result.sim_bias_sq = bias_acc / nd;
  result.mc_stderr_bias = std::sqrt(stderr_acc) / nd;

  const double var_mean = var_acc.value() / md;
  result.sim_variance = std::max(0.0, var_mean);
  if (m > 1) {
    // Deviations about the first realization vanish exactly when all agree.
    const double pivot = sums.front().variances.front();
    CompensatedSum spread;
    for (const BlockSums& b : sums) {
      for (double v : b.variances) spread.add((v - pivot) * (v - pivot));
    }
    const double offset = var_mean - pivot;
    const double ss = std::max(0.0, spread.value() - md * offset * offset);
    result.mc_stderr_var = std::sqrt(ss / (md - 1.0) / md);
  }
  return result;
}

std::vector<SimResult> simulate_grid(const ObservationPanel& panel, const TruthSeries& truth,
                                     const WeightVector& beta, const SimConfig& cfg) {
  validate(cfg);
  std::vector<SimResult> out;
  out.reserve(cfg.alpha_grid.size());
  for (double a : cfg.alpha_grid) {
    out.push_back(simulate(panel, truth, beta, AvailabilityModel{a}, cfg));
  }
  return out;
}

ExactResult enumerate_exact(const ObservationPanel& panel, const TruthSeries& truth,
                            const WeightVector& beta, const AvailabilityModel& avail) {
  check_inputs(panel, truth, beta);
  if (panel.n_sites() > kMaxEnumerationSites) {
    fail(Errc::too_many_sites, "exact enumeration supports at most " +
                                   std::to_string(kMaxEnumerationSites) + " sites, got " +
                                   std::to_string(panel.n_sites()));
  }
  const Eigen::MatrixXd& r = panel.values();
  const Eigen::Index steps = panel.n_steps();
  std::vector<Eigen::Index> sites;
  for (Eigen::Index i = 0; i < panel.n_sites(); ++i) {
    if (beta[i] > 0.0) sites.push_back(i);
  }
  const int k = static_cast<int>(sites.size());
  const double a = avail.alpha();

  // Probability of a support pattern with j available sites, conditional on j > 0.
  const double z = 1.0 - std::pow(1.0 - a, k);
  std::vector<double> prob(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    prob[static_cast<std::size_t>(j)] = std::pow(a, j) * std::pow(1.0 - a, k - j) / z;
  }

  // Centering per step keeps the second moment well conditioned.
  const Eigen::VectorXd shift = r.transpose() * beta.values();
  Eigen::VectorXd first = Eigen::VectorXd::Zero(steps);
  Eigen::VectorXd second = Eigen::VectorXd::Zero(steps);
  Eigen::VectorXd num(steps);
  const std::uint32_t masks = 1U << k;
  for (std::uint32_t mask = 1; mask < masks; ++mask) {
    const int j = std::popcount(mask);
    const double p = prob[static_cast<std::size_t>(j)];
    if (p == 0.0) continue;
    num.setZero();
    double den = 0.0;
    for (int b = 0; b < k; ++b) {
      if ((mask >> b) & 1U) {
        const Eigen::Index i = sites[static_cast<std::size_t>(b)];
        num += beta[i] * r.row(i).transpose();
        den += beta[i];
      }
    }
    for (Eigen::Index t = 0; t < steps; ++t) {
      const double f = num[t] / den - shift[t];
      first[t] += p * f;
      second[t] += p * f * f;
    }
  }

  ExactResult out;
  out.mean_series = first + shift;
  out.pattern_variance = (second.array() - first.array().square()).max(0.0).matrix();
  out.bias_sq = (out.mean_series - truth.values()).squaredNorm() / static_cast<double>(steps);
  const double spread = temporal_variance(out.mean_series);
  const double mean_v = out.pattern_variance.mean();
  const auto nd = static_cast<double>(steps);
  out.variance = spread + (nd - 1.0) / nd * mean_v;
  out.total_variance = spread + mean_v;
  return out;
}

RSMoments enumerate_rs_moments(const ObservationPanel& panel, const WeightVector& beta,
                               const AvailabilityModel& avail) {
  const Eigen::Index n = panel.n_sites();
  if (beta.size() != n) fail(Errc::dimension_mismatch, "weights do not match the panel");
  if (n > kMaxEnumerationSites) {
    fail(Errc::too_many_sites, "exact enumeration supports at most " +
                                   std::to_string(kMaxEnumerationSites) + " sites");
  }
  const Eigen::MatrixXd& r = panel.values();
  const Eigen::Index steps = panel.n_steps();
  const double a = avail.alpha();
  const std::uint32_t masks = 1U << n;
  const double per_step = 1.0 / static_cast<double>(steps);

  // Two passes over the joint distribution: means, then central moments.
  std::vector<double> prob(masks);
  Eigen::MatrixXd rvals(masks, steps);
  Eigen::VectorXd svals(masks);
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    const int j = std::popcount(mask);
    prob[mask] = std::pow(a, j) * std::pow(1.0 - a, static_cast<int>(n) - j);
    Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(steps);
    double den = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) {
        num += beta[i] * r.row(i);
        den += beta[i];
      }
    }
    rvals.row(mask) = num;
    svals[mask] = den;
  }

  RSMoments out;
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    out.mu_R += prob[mask] * rvals.row(mask).sum() * per_step;
    out.mu_S += prob[mask] * svals[mask];
  }
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    const double ds = svals[mask] - out.mu_S;
    double rr = 0.0;
    double rs = 0.0;
    for (Eigen::Index t = 0; t < steps; ++t) {
      const double dr = rvals(mask, t) - out.mu_R;
      rr += dr * dr;
      rs += dr * ds;
    }
    out.var_R += prob[mask] * rr * per_step;
    out.cov_RS += prob[mask] * rs * per_step;
    out.var_S += prob[mask] * ds * ds;
  }
  return out;
}

}  // namespace spatavg
