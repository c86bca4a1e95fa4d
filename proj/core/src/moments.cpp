#include "spatavg/moments.hpp"

#include "spatavg/error.hpp"
#include "spatavg/linalg.hpp"
#include "spatavg/panel_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace spatavg {

Eigen::VectorXd MomentSet::zeta_sq_at(double other_alpha) const {
  return (second_moment.array() - sigma_eps_sq - other_alpha * mean_obs.array().square())
      .matrix();
}

MomentSet estimate_moments(const ObservationPanel& panel, const TruthSeries& truth,
                           const NoiseModel& noise, const AvailabilityModel& avail) {
  validate_panel(panel, truth);
  const Eigen::MatrixXd& r = panel.values();
  const auto steps = static_cast<double>(panel.n_steps());

  MomentSet m;
  m.n_steps = panel.n_steps();
  m.alpha = avail.alpha();
  m.sigma_eps_sq = noise.variance();
  m.mean_truth = truth.values().mean();
  m.mean_obs = r.rowwise().mean();
  m.second_moment = r.array().square().rowwise().mean().matrix();

  const Eigen::MatrixXd centered = r.colwise() - m.mean_obs;
  m.cov_obs = centered * centered.transpose() / steps;
  m.cov_obs = 0.5 * (m.cov_obs + m.cov_obs.transpose()).eval();

  const Eigen::MatrixXd deviation = r.rowwise() - truth.values().transpose();
  m.d1 = deviation * deviation.transpose() / steps;
  m.d1 = 0.5 * (m.d1 + m.d1.transpose()).eval();

  m.d2_diag = m.mean_obs.array() - m.mean_truth;
  m.f_diag = m.d2_diag.cwiseAbs2();
  m.zeta_sq = m.zeta_sq_at(m.alpha);
  return m;
}

void check_moment_invariants(const MomentSet& m) {
  const Eigen::Index n = m.size();
  if (n < 1) fail(Errc::degenerate_panel, "moment set has no locations");
  if (m.n_steps < 2) fail(Errc::degenerate_panel, "moment set needs at least two time steps");
  const bool shapes_ok = m.second_moment.size() == n && m.cov_obs.rows() == n &&
                         m.cov_obs.cols() == n && m.d1.rows() == n && m.d1.cols() == n &&
                         m.d2_diag.size() == n && m.f_diag.size() == n && m.zeta_sq.size() == n;
  if (!shapes_ok) fail(Errc::dimension_mismatch, "moment set fields disagree in size");
  if (!m.mean_obs.allFinite() || !m.second_moment.allFinite() || !m.cov_obs.allFinite() ||
      !m.d1.allFinite() || !m.d2_diag.allFinite() || !m.zeta_sq.allFinite() ||
      !std::isfinite(m.mean_truth) || !std::isfinite(m.sigma_eps_sq)) {
    fail(Errc::non_finite_value, "moment set contains a non-finite value");
  }
  (void)AvailabilityModel{m.alpha};
  if (m.sigma_eps_sq < 0.0) fail(Errc::invalid_parameter, "sigma_eps_sq must be >= 0");
  if (!linalg::is_symmetric(m.cov_obs) || !linalg::is_psd(m.cov_obs)) {
    fail(Errc::non_psd_matrix, "cov_obs is not symmetric positive semidefinite");
  }
  if (!linalg::is_symmetric(m.d1) || !linalg::is_psd(m.d1)) {
    fail(Errc::non_psd_matrix, "d1 is not symmetric positive semidefinite");
  }
  const double f_err = (m.f_diag - m.d2_diag.cwiseAbs2()).cwiseAbs().maxCoeff();
  if (f_err > 1e-12 * std::max(1.0, m.f_diag.cwiseAbs().maxCoeff())) {
    fail(Errc::invalid_parameter, "f_diag is not the square of d2_diag");
  }
}

Eigen::MatrixXd build_variance_matrix(const MomentSet& m, const AvailabilityModel& avail,
                                      double mu_upsilon) {
  const double a = avail.alpha();
  const Eigen::VectorXd f = (m.mean_obs.array() - mu_upsilon).square().matrix();
  Eigen::MatrixXd c = m.cov_obs / a;
  c.diagonal() += avail.missing_ratio() * f;
  return c;
}

Eigen::MatrixXd build_variance_matrix(const MomentSet& m, const AvailabilityModel& avail) {
  return build_variance_matrix(m, avail, m.mean_truth);
}

namespace {

constexpr const char* kFormatTag = "spatavg-moments-1";

void put_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  out << key << " =";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << io::format_double(v[i]);
  out << '\n';
}

void put_matrix(std::ostream& out, const char* key, const Eigen::MatrixXd& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    out << key << '.' << i << " =";
    for (Eigen::Index j = 0; j < a.cols(); ++j) out << ' ' << io::format_double(a(i, j));
    out << '\n';
  }
}

using KeyValues = std::map<std::string, std::string>;

const std::string& need(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) fail(Errc::parse_error, "moments file is missing key '" + key + "'");
  return it->second;
}

Eigen::VectorXd get_vector(const KeyValues& kv, const std::string& key, Eigen::Index n) {
  std::istringstream ss(need(kv, key));
  std::vector<double> values;
  std::string token;
  while (ss >> token) values.push_back(io::parse_double(token));
  if (static_cast<Eigen::Index>(values.size()) != n) {
    fail(Errc::dimension_mismatch, "moments key '" + key + "' has " +
                                       std::to_string(values.size()) + " entries, expected " +
                                       std::to_string(n));
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), n);
}

Eigen::MatrixXd get_matrix(const KeyValues& kv, const std::string& key, Eigen::Index n) {
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.row(i) = get_vector(kv, key + "." + std::to_string(i), n).transpose();
  }
  return a;
}

}  // namespace

void write_moments(std::ostream& out, const MomentSet& m, const SiteInfo& sites) {
  if (static_cast<Eigen::Index>(sites.size()) != m.size()) {
    fail(Errc::dimension_mismatch, "site list does not match moment set size");
  }
  out << "format = " << kFormatTag << '\n';
  out << "n = " << m.size() << '\n';
  out << "steps = " << m.n_steps << '\n';
  out << "alpha = " << io::format_double(m.alpha) << '\n';
  out << "sigma_eps_sq = " << io::format_double(m.sigma_eps_sq) << '\n';
  out << "mean_truth = " << io::format_double(m.mean_truth) << '\n';
  out << "location_ids =";
  for (std::size_t i = 0; i < sites.ids.size(); ++i) out << (i == 0 ? " " : ",") << sites.ids[i];
  out << '\n';
  if (sites.coords) {
    Eigen::VectorXd lat(m.size());
    Eigen::VectorXd lon(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      lat[i] = (*sites.coords)[static_cast<std::size_t>(i)].lat;
      lon[i] = (*sites.coords)[static_cast<std::size_t>(i)].lon;
    }
    put_vector(out, "lat", lat);
    put_vector(out, "lon", lon);
  }
  put_vector(out, "mean_obs", m.mean_obs);
  put_vector(out, "second_moment", m.second_moment);
  put_vector(out, "zeta_sq", m.zeta_sq);
  put_vector(out, "d2_diag", m.d2_diag);
  put_vector(out, "f_diag", m.f_diag);
  put_matrix(out, "cov_obs", m.cov_obs);
  put_matrix(out, "d1", m.d1);
}

StoredMoments read_moments(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(Errc::parse_error, "moments line " + std::to_string(line_no) + " has no '='");
    }
    auto key = line.substr(0, eq);
    auto value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? std::string{} : value.substr(vstart);
    kv[key] = value;
  }
  if (need(kv, "format") != kFormatTag) {
    fail(Errc::parse_error, "unsupported moments format '" + kv["format"] + "'");
  }
  const auto n = static_cast<Eigen::Index>(io::parse_double(need(kv, "n")));
  if (n < 1) fail(Errc::degenerate_panel, "moments file declares no locations");

  MomentSet out;
  out.n_steps = static_cast<Eigen::Index>(io::parse_double(need(kv, "steps")));
  out.alpha = io::parse_double(need(kv, "alpha"));
  out.sigma_eps_sq = io::parse_double(need(kv, "sigma_eps_sq"));
  out.mean_truth = io::parse_double(need(kv, "mean_truth"));
  out.mean_obs = get_vector(kv, "mean_obs", n);
  out.second_moment = get_vector(kv, "second_moment", n);
  out.zeta_sq = get_vector(kv, "zeta_sq", n);
  out.d2_diag = get_vector(kv, "d2_diag", n);
  out.f_diag = get_vector(kv, "f_diag", n);
  out.cov_obs = get_matrix(kv, "cov_obs", n);
  out.d1 = get_matrix(kv, "d1", n);
  check_moment_invariants(out);

  SiteInfo info;
  info.ids = io::split_csv_line(need(kv, "location_ids"));
  if (static_cast<Eigen::Index>(info.ids.size()) != n) {
    fail(Errc::dimension_mismatch, "moments file location_ids count differs from n");
  }
  if (kv.count("lat") != 0 || kv.count("lon") != 0) {
    const Eigen::VectorXd lat = get_vector(kv, "lat", n);
    const Eigen::VectorXd lon = get_vector(kv, "lon", n);
    std::vector<Coord> coords;
    for (Eigen::Index i = 0; i < n; ++i) coords.push_back({lat[i], lon[i]});
    info.coords = std::move(coords);
  }
  return {std::move(out), std::move(info)};
}

StoredMoments read_moments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return read_moments(in);
}

}  // namespace spatavg
