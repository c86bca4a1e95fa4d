#include "spatavg/data_model.hpp"

#include "spatavg/error.hpp"

#include <cmath>

namespace spatavg {

namespace {

std::vector<std::string> numbered_ids(const char* prefix, Eigen::Index count) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) {
    ids.push_back(prefix + std::to_string(i + 1));
  }
  return ids;
}

}  // namespace

ObservationPanel::ObservationPanel(Eigen::MatrixXd values,
                                   std::vector<std::string> location_ids,
                                   std::vector<std::string> time_ids,
                                   std::optional<std::vector<Coord>> coords)
    : values_(std::move(values)),
      sites_{std::move(location_ids), std::move(coords)},
      time_ids_(std::move(time_ids)) {
  if (values_.rows() < 1) {
    fail(Errc::degenerate_panel, "panel needs at least one location");
  }
  if (values_.cols() < 2) {
    fail(Errc::degenerate_panel,
         "panel needs at least two time steps, got " + std::to_string(values_.cols()));
  }
  if (static_cast<Eigen::Index>(sites_.ids.size()) != values_.rows()) {
    fail(Errc::dimension_mismatch, "location id count " + std::to_string(sites_.ids.size()) +
                                       " does not match panel rows " +
                                       std::to_string(values_.rows()));
  }
  if (static_cast<Eigen::Index>(time_ids_.size()) != values_.cols()) {
    fail(Errc::dimension_mismatch, "time id count " + std::to_string(time_ids_.size()) +
                                       " does not match panel columns " +
                                       std::to_string(values_.cols()));
  }
  if (sites_.coords && static_cast<Eigen::Index>(sites_.coords->size()) != values_.rows()) {
    fail(Errc::dimension_mismatch, "coordinate count does not match panel rows");
  }
  if (!values_.allFinite()) {
    fail(Errc::non_finite_value, "panel contains a non-finite value");
  }
  if (sites_.coords) {
    for (const Coord& c : *sites_.coords) {
      if (!std::isfinite(c.lat) || !std::isfinite(c.lon)) {
        fail(Errc::non_finite_value, "site coordinates must be finite");
      }
    }
  }
}

ObservationPanel::ObservationPanel(Eigen::MatrixXd values)
    : ObservationPanel(values, numbered_ids("s", values.rows()),
                       numbered_ids("t", values.cols())) {}

std::span<const double> ObservationPanel::column(Eigen::Index t) const {
  if (t < 0 || t >= n_steps()) {
    fail(Errc::index_out_of_range, "time index " + std::to_string(t) + " out of range");
  }
  return {values_.data() + t * values_.rows(), static_cast<std::size_t>(values_.rows())};
}

ObservationPanel ObservationPanel::slice_steps(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 0 || first + count > n_steps()) {
    fail(Errc::index_out_of_range, "time slice [" + std::to_string(first) + ", " +
                                       std::to_string(first + count) + ") out of range");
  }
  std::vector<std::string> times(time_ids_.begin() + first, time_ids_.begin() + first + count);
  return ObservationPanel(values_.middleCols(first, count), sites_.ids, std::move(times),
                          sites_.coords);
}

TruthSeries::TruthSeries(Eigen::VectorXd values) : values_(std::move(values)) {
  if (values_.size() < 1) {
    fail(Errc::degenerate_panel, "truth series is empty");
  }
  if (!values_.allFinite()) {
    fail(Errc::non_finite_value, "truth series contains a non-finite value");
  }
}

TruthSeries TruthSeries::slice(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 0 || first + count > size()) {
    fail(Errc::index_out_of_range, "truth slice out of range");
  }
  return TruthSeries(values_.segment(first, count));
}

AvailabilityModel::AvailabilityModel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    fail(Errc::invalid_parameter,
         "availability alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

NoiseModel::NoiseModel(double sigma_eps) : sigma_(sigma_eps) {
  if (!std::isfinite(sigma_eps) || sigma_eps < 0.0) {
    fail(Errc::invalid_parameter,
         "noise standard deviation must be finite and >= 0, got " + std::to_string(sigma_eps));
  }
}

WeightVector::WeightVector(Eigen::VectorXd beta) : beta_(std::move(beta)) {
  if (beta_.size() < 1) {
    fail(Errc::invalid_weights, "weight vector is empty");
  }
  if (!beta_.allFinite()) {
    fail(Errc::non_finite_value, "weights contain a non-finite value");
  }
  if ((beta_.array() < 0.0).any()) {
    fail(Errc::invalid_weights, "weights must be nonnegative");
  }
  const double sum = beta_.sum();
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    fail(Errc::invalid_weights, "weights sum to " + std::to_string(sum) + ", expected 1");
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    beta_ /= sum;
  }
}

WeightVector WeightVector::uniform(Eigen::Index n) {
  if (n < 1) fail(Errc::invalid_weights, "uniform weights need n >= 1");
  return WeightVector(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

WeightVector WeightVector::unit(Eigen::Index n, Eigen::Index k) {
  if (k < 0 || k >= n) fail(Errc::index_out_of_range, "unit weight index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[k] = 1.0;
  return WeightVector(std::move(e));
}

Eigen::Index WeightVector::support(double threshold) const {
  return (beta_.array() > threshold).count();
}

void validate_panel(const ObservationPanel& panel, const TruthSeries& truth) {
  if (panel.n_steps() < 2) {
    fail(Errc::degenerate_panel, "panel needs at least two time steps");
  }
  if (truth.size() != panel.n_steps()) {
    fail(Errc::dimension_mismatch, "truth length " + std::to_string(truth.size()) +
                                       " does not match panel steps " +
                                       std::to_string(panel.n_steps()));
  }
  if (!panel.values().allFinite() || !truth.values().allFinite()) {
    fail(Errc::non_finite_value, "panel or truth contains a non-finite value");
  }
}

double evaluate_average(std::span<const double> column, const WeightVector& beta,
                        std::span<const std::uint8_t> available) {
  const auto n = static_cast<std::size_t>(beta.size());
  if (column.size() != n || available.size() != n) {
    fail(Errc::dimension_mismatch, "column, weights and availability differ in length");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (available[i] != 0) {
      const double b = beta[static_cast<Eigen::Index>(i)];
      num += b * column[i];
      den += b;
    }
  }
  if (!(den > 0.0)) {
    fail(Errc::empty_support, "no available site carries positive weight");
  }
  return num / den;
}

}  // namespace spatavg
