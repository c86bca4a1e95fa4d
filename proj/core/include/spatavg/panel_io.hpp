#pragma once

#include "spatavg/data_model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spatavg::io {

// CSV layouts (UTF-8, comma separated, numerics unquoted, '#' lines ignored):
//
//   panel:   location_id,lat,lon,t_1,...,t_N   one row per location; lat/lon
//            may be left empty on every row when coordinates are unknown
//   truth:   t,value                           N rows
//   weights: location_id,...,beta,...          looked up by column name

ObservationPanel read_panel_csv(std::istream& in);
ObservationPanel read_panel_csv(const std::filesystem::path& path);
void write_panel_csv(std::ostream& out, const ObservationPanel& panel);

TruthSeries read_truth_csv(std::istream& in);
TruthSeries read_truth_csv(const std::filesystem::path& path);
void write_truth_csv(std::ostream& out, const TruthSeries& truth,
                     const std::vector<std::string>& time_ids = {});

/// Weights matched to `sites` by location id.
WeightVector read_weights_csv(const std::filesystem::path& path, const SiteInfo& sites);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Strict decimal parse of a whole field; throws Errc::parse_error.
double parse_double(std::string_view text);

std::vector<std::string> split_csv_line(std::string_view line);

/**
 * Writes `contents` to a sibling temporary file and renames it over `path`,
 * so a failed run never leaves a partial file behind.
 */
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace spatavg::io
