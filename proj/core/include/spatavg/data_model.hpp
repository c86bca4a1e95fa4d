#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spatavg {

/// Geographic position of a site, in degrees.
struct Coord {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const Coord&) const = default;
};

/// Site metadata carried alongside any per-site quantity.
struct SiteInfo {
  std::vector<std::string> ids;
  std::optional<std::vector<Coord>> coords;

  std::size_t size() const noexcept { return ids.size(); }
};

/**
 * n locations by N time steps of observed values r_i(t).
 *
 * Row i holds one location, column t one time step, so each column (all
 * sites at a single time) is contiguous. The panel never stores gaps:
 * missingness is a property of a query or a simulation draw.
 */
class ObservationPanel {
 public:
  ObservationPanel(Eigen::MatrixXd values, std::vector<std::string> location_ids,
                   std::vector<std::string> time_ids,
                   std::optional<std::vector<Coord>> coords = std::nullopt);

  /// Panel with generated ids "s1".."sn" and "t1".."tN".
  explicit ObservationPanel(Eigen::MatrixXd values);

  Eigen::Index n_sites() const noexcept { return values_.rows(); }
  Eigen::Index n_steps() const noexcept { return values_.cols(); }

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  std::span<const double> column(Eigen::Index t) const;

  const std::vector<std::string>& location_ids() const noexcept { return sites_.ids; }
  const std::vector<std::string>& time_ids() const noexcept { return time_ids_; }
  const std::optional<std::vector<Coord>>& coords() const noexcept { return sites_.coords; }
  const SiteInfo& sites() const noexcept { return sites_; }

  /// Contiguous range of time steps [first, first + count).
  ObservationPanel slice_steps(Eigen::Index first, Eigen::Index count) const;

 private:
  Eigen::MatrixXd values_;
  SiteInfo sites_;
  std::vector<std::string> time_ids_;
};

/// Reference spatial average per time step, treated as ground truth.
class TruthSeries {
 public:
  explicit TruthSeries(Eigen::VectorXd values);

  Eigen::Index size() const noexcept { return values_.size(); }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](Eigen::Index t) const { return values_[t]; }

  TruthSeries slice(Eigen::Index first, Eigen::Index count) const;

 private:
  Eigen::VectorXd values_;
};

/// Probability alpha in (0, 1] that any single observation is reported.
class AvailabilityModel {
 public:
  explicit AvailabilityModel(double alpha);

  double alpha() const noexcept { return alpha_; }
  /// (1 - alpha) / alpha, the factor multiplying every missing-data term.
  double missing_ratio() const noexcept { return (1.0 - alpha_) / alpha_; }

 private:
  double alpha_;
};

/// Standard deviation of the additive measurement noise.
class NoiseModel {
 public:
  explicit NoiseModel(double sigma_eps = 0.0);

  double sigma_eps() const noexcept { return sigma_; }
  double variance() const noexcept { return sigma_ * sigma_; }

 private:
  double sigma_;
};

/**
 * Nonnegative averaging weights summing to one.
 *
 * Inputs whose sum is within 1e-9 of one are renormalized; larger
 * deviations, negative or non-finite entries are rejected.
 */
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-12;
  static constexpr double kRenormalizeTolerance = 1e-9;

  explicit WeightVector(Eigen::VectorXd beta);

  static WeightVector uniform(Eigen::Index n);
  static WeightVector unit(Eigen::Index n, Eigen::Index k);

  Eigen::Index size() const noexcept { return beta_.size(); }
  const Eigen::VectorXd& values() const noexcept { return beta_; }
  double operator[](Eigen::Index i) const { return beta_[i]; }

  /// Number of weights strictly above `threshold`.
  Eigen::Index support(double threshold = 0.0) const;

 private:
  Eigen::VectorXd beta_;
};

/// Throws if panel and truth disagree in length or break their invariants.
void validate_panel(const ObservationPanel& panel, const TruthSeries& truth);

/**
 * Ratio estimator of the spatial average for one availability pattern:
 * (sum_i beta_i s_i r_i) / (sum_i beta_i s_i).
 *
 * Throws Errc::empty_support when no site with positive weight is available.
 */
double evaluate_average(std::span<const double> column, const WeightVector& beta,
                        std::span<const std::uint8_t> available);

}  // namespace spatavg
