#include "spatavg/synthetic.hpp"

#include "spatavg/error.hpp"
#include "spatavg/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace spatavg {

namespace {

// Independent substreams of one seed.
enum StreamTag : std::uint64_t { kSiteTag = 1, kFieldTag = 2, kNoiseTag = 3 };

std::uint64_t tagged(std::uint64_t seed, StreamTag tag) {
  return rng::mix64(seed + 0x2545F4914F6CDD1DULL * static_cast<std::uint64_t>(tag));
}

struct Point {
  double x;
  double y;
};

std::vector<Point> dense_grid(const SynthConfig& cfg) {
  std::vector<Point> pts;
  if (cfg.layout == SiteLayout::line) {
    const Eigen::Index g = std::max<Eigen::Index>(64, 4 * cfg.n_sites);
    for (Eigen::Index k = 0; k < g; ++k) {
      pts.push_back({(static_cast<double>(k) + 0.5) / static_cast<double>(g), 0.5});
    }
  } else {
    const auto side = std::max<Eigen::Index>(
        12, static_cast<Eigen::Index>(std::ceil(std::sqrt(4.0 * static_cast<double>(cfg.n_sites)))));
    const auto sd = static_cast<double>(side);
    for (Eigen::Index iy = 0; iy < side; ++iy) {
      for (Eigen::Index ix = 0; ix < side; ++ix) {
        pts.push_back({(static_cast<double>(ix) + 0.5) / sd, (static_cast<double>(iy) + 0.5) / sd});
      }
    }
  }
  return pts;
}

Eigen::MatrixXd correlation_factor(const std::vector<Point>& pts, double length) {
  const auto g = static_cast<Eigen::Index>(pts.size());
  if (length == 0.0) return Eigen::MatrixXd::Identity(g, g);
  Eigen::MatrixXd c(g, g);
  for (Eigen::Index a = 0; a < g; ++a) {
    for (Eigen::Index b = 0; b < g; ++b) {
      const double d = std::hypot(pts[static_cast<std::size_t>(a)].x - pts[static_cast<std::size_t>(b)].x,
                                  pts[static_cast<std::size_t>(a)].y - pts[static_cast<std::size_t>(b)].y);
      c(a, b) = std::exp(-d / length);
    }
  }
  for (double jitter = 1e-12;; jitter *= 10.0) {
    Eigen::MatrixXd cj = c;
    cj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(cj);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    if (jitter > 1e-3) fail(Errc::invalid_parameter, "correlation matrix is not factorizable");
  }
}

double shape(const Point& p) {
  return 0.7 * std::sin(2.0 * std::numbers::pi * p.x) * std::cos(std::numbers::pi * p.y) +
         0.3 * (2.0 * p.y - 1.0);
}

}  // namespace

SyntheticData generate_synthetic(const SynthConfig& cfg) {
  if (cfg.n_sites < 1) fail(Errc::invalid_parameter, "synthetic panel needs at least one site");
  if (cfg.n_steps < 2) fail(Errc::invalid_parameter, "synthetic panel needs at least two steps");
  if (!std::isfinite(cfg.corr_length) || cfg.corr_length < 0.0) {
    fail(Errc::invalid_parameter, "corr_length must be finite and >= 0");
  }
  if (!std::isfinite(cfg.sigma_eps) || cfg.sigma_eps < 0.0) {
    fail(Errc::invalid_parameter, "sigma_eps must be finite and >= 0");
  }
  if (!(cfg.mean_contrast >= 0.0 && cfg.mean_contrast < 1.0)) {
    fail(Errc::invalid_parameter, "mean_contrast must lie in [0, 1)");
  }
  if (!std::isfinite(cfg.coeff_variation) || cfg.coeff_variation < 0.0) {
    fail(Errc::invalid_parameter, "coeff_variation must be finite and >= 0");
  }

  const std::vector<Point> pts = dense_grid(cfg);
  const auto g = static_cast<Eigen::Index>(pts.size());
  const Eigen::Index n = cfg.n_sites;
  const Eigen::Index steps = cfg.n_steps;

  // Partial Fisher-Yates draw of n grid points, kept in grid order.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(g));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  rng::Stream site_stream(tagged(cfg.seed, kSiteTag));
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto span = static_cast<std::uint64_t>(g - k);
    const auto pick = k + static_cast<Eigen::Index>(site_stream.next() % span);
    std::swap(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick)]);
  }
  std::vector<Eigen::Index> sites(order.begin(), order.begin() + n);
  std::sort(sites.begin(), sites.end());

  const Eigen::MatrixXd factor = correlation_factor(pts, cfg.corr_length);
  Eigen::VectorXd mean(g);
  Eigen::VectorXd sd(g);
  for (Eigen::Index k = 0; k < g; ++k) {
    mean[k] = 7.0 * (1.0 + cfg.mean_contrast * shape(pts[static_cast<std::size_t>(k)]));
    sd[k] = cfg.coeff_variation * mean[k];
  }

  SyntheticData out{ObservationPanel(Eigen::MatrixXd::Zero(n, steps)),
                    TruthSeries(Eigen::VectorXd::Zero(steps)), Eigen::MatrixXd(n, steps)};
  Eigen::MatrixXd obs(n, steps);
  Eigen::VectorXd truth(steps);
  Eigen::VectorXd xi(g);
  const std::uint64_t field_seed = tagged(cfg.seed, kFieldTag);
  const std::uint64_t noise_seed = tagged(cfg.seed, kNoiseTag);
  for (Eigen::Index t = 0; t < steps; ++t) {
    rng::Stream field_stream(rng::stream_key(field_seed, static_cast<std::uint64_t>(t)));
    for (Eigen::Index k = 0; k < g; ++k) xi[k] = field_stream.normal();
    const Eigen::VectorXd upsilon = mean + sd.cwiseProduct(factor * xi);
    truth[t] = upsilon.mean();
    rng::Stream noise_stream(rng::stream_key(noise_seed, static_cast<std::uint64_t>(t)));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = upsilon[sites[static_cast<std::size_t>(i)]];
      out.field(i, t) = v;
      obs(i, t) = cfg.sigma_eps == 0.0 ? v : v + cfg.sigma_eps * noise_stream.normal();
    }
  }

  std::vector<std::string> location_ids;
  std::vector<Coord> coords;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& p = pts[static_cast<std::size_t>(sites[static_cast<std::size_t>(i)])];
    location_ids.push_back("g" + std::to_string(sites[static_cast<std::size_t>(i)]));
    coords.push_back({8.0 + 27.0 * p.y, 68.0 + 29.0 * p.x});
  }
  std::vector<std::string> time_ids;
  for (Eigen::Index t = 0; t < steps; ++t) time_ids.push_back(std::to_string(t + 1));

  out.panel = ObservationPanel(std::move(obs), std::move(location_ids), std::move(time_ids),
                               std::move(coords));
  out.truth = TruthSeries(std::move(truth));
  return out;
}

}  // namespace spatavg
