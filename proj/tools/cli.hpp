#pragma once

#include "spatavg/error.hpp"
#include "spatavg/mc_sim.hpp"
#include "spatavg/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace spatavg::cli {

enum class Subcommand { moments, estimate, simulate, optimize, se_report, synth };
enum class Objective { bias, variance, mse };
/// Where evaluated weights come from: fixed, read from file or optimized per alpha.
enum class Scheme { uniform, file, bias, variance, mse };

struct RunConfig {
  Subcommand subcommand = Subcommand::estimate;
  std::optional<std::filesystem::path> panel_path;
  std::optional<std::filesystem::path> truth_path;
  std::optional<std::filesystem::path> moments_path;
  std::optional<std::filesystem::path> weights_path;
  /// Text as given; parsed into `alphas`.
  std::string alpha_spec;
  std::vector<double> alphas;
  double sigma_eps = 0.0;
  Objective objective = Objective::mse;
  Scheme scheme = Scheme::uniform;
  std::uint64_t seed = 42;
  std::int64_t realizations = 5000;
  unsigned threads = 1;
  bool trace = false;
  EmptyPatternPolicy empty_policy = EmptyPatternPolicy::resample;
  /// se-report blocks: "first-last,..." one-based inclusive step ranges.
  std::string blocks;
  std::int64_t block_size = 0;
  SynthConfig synth;
  std::filesystem::path output_dir = ".";
};

/// Exit status for each error category; 0 is success, 1 an unexpected failure.
int exit_code(Errc code) noexcept;

/**
 * "a", "a,b,c" or "start:stop:step" (inclusive of stop). Values are
 * rounded to 12 decimals so that grids print cleanly. Throws
 * Errc::parse_error on malformed text and Errc::invalid_parameter for
 * values outside (0, 1].
 */
std::vector<double> parse_alpha_grid(const std::string& spec);

/// Executes one subcommand. Errors print "error: <category>: <message>"
/// on `err` and map to exit_code().
int run(const RunConfig& cfg, std::ostream& err);

/// Parses flags and an optional --config file (flags win), then runs.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spatavg::cli
