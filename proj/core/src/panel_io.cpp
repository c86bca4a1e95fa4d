#include "spatavg/panel_io.hpp"

#include "spatavg/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

namespace spatavg::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Next non-blank, non-comment line; false at end of input.
bool next_record(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    return true;
  }
  return false;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  fail(Errc::parse_error, "line " + std::to_string(line_no) + ": " + what);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto end = comma == std::string_view::npos ? line.size() : comma;
    fields.emplace_back(trim(line.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(Errc::parse_error, "not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

ObservationPanel read_panel_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) fail(Errc::parse_error, "panel file is empty");

  const auto header = split_csv_line(line);
  if (header.size() < 4 || lower(header[0]) != "location_id" || lower(header[1]) != "lat" ||
      lower(header[2]) != "lon") {
    parse_fail(line_no, "panel header must start with location_id,lat,lon followed by times");
  }
  std::vector<std::string> time_ids(header.begin() + 3, header.end());
  const auto n_steps = static_cast<Eigen::Index>(time_ids.size());

  std::vector<std::string> ids;
  std::vector<Coord> coords;
  std::vector<std::vector<double>> rows;
  int with_coords = 0;
  int without_coords = 0;

  while (next_record(in, line, line_no)) {
    auto fields = split_csv_line(line);
    if (static_cast<Eigen::Index>(fields.size()) != n_steps + 3) {
      parse_fail(line_no, "expected " + std::to_string(n_steps + 3) + " fields, found " +
                              std::to_string(fields.size()));
    }
    if (fields[0].empty()) parse_fail(line_no, "empty location_id");
    ids.push_back(fields[0]);

    if (fields[1].empty() && fields[2].empty()) {
      ++without_coords;
      coords.push_back({});
    } else {
      ++with_coords;
      try {
        coords.push_back({parse_double(fields[1]), parse_double(fields[2])});
      } catch (const Error& e) {
        parse_fail(line_no, e.what());
      }
    }

    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(n_steps));
    for (Eigen::Index t = 0; t < n_steps; ++t) {
      try {
        row.push_back(parse_double(fields[static_cast<std::size_t>(t + 3)]));
      } catch (const Error& e) {
        parse_fail(line_no, e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  if (with_coords > 0 && without_coords > 0) {
    fail(Errc::parse_error, "coordinates must be given for every location or for none");
  }

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), n_steps);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index t = 0; t < n_steps; ++t) {
      values(static_cast<Eigen::Index>(i), t) = rows[i][static_cast<std::size_t>(t)];
    }
  }
  std::optional<std::vector<Coord>> maybe_coords;
  if (with_coords > 0) maybe_coords = std::move(coords);
  return ObservationPanel(std::move(values), std::move(ids), std::move(time_ids),
                          std::move(maybe_coords));
}

ObservationPanel read_panel_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_panel_csv(in);
}

void write_panel_csv(std::ostream& out, const ObservationPanel& panel) {
  out << "location_id,lat,lon";
  for (const auto& t : panel.time_ids()) out << ',' << t;
  out << '\n';
  const auto& coords = panel.coords();
  for (Eigen::Index i = 0; i < panel.n_sites(); ++i) {
    out << panel.location_ids()[static_cast<std::size_t>(i)] << ',';
    if (coords) {
      const Coord& c = (*coords)[static_cast<std::size_t>(i)];
      out << format_double(c.lat) << ',' << format_double(c.lon);
    } else {
      out << ',';
    }
    for (Eigen::Index t = 0; t < panel.n_steps(); ++t) {
      out << ',' << format_double(panel.values()(i, t));
    }
    out << '\n';
  }
}

TruthSeries read_truth_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) fail(Errc::parse_error, "truth file is empty");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || lower(header[0]) != "t" || lower(header[1]) != "value") {
    parse_fail(line_no, "truth header must be t,value");
  }
  std::vector<double> values;
  while (next_record(in, line, line_no)) {
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) parse_fail(line_no, "expected 2 fields");
    try {
      values.push_back(parse_double(fields[1]));
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  return TruthSeries(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                       static_cast<Eigen::Index>(values.size())));
}

TruthSeries read_truth_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_truth_csv(in);
}

void write_truth_csv(std::ostream& out, const TruthSeries& truth,
                     const std::vector<std::string>& time_ids) {
  out << "t,value\n";
  for (Eigen::Index t = 0; t < truth.size(); ++t) {
    if (static_cast<std::size_t>(t) < time_ids.size()) {
      out << time_ids[static_cast<std::size_t>(t)];
    } else {
      out << "t" << (t + 1);
    }
    out << ',' << format_double(truth[t]) << '\n';
  }
}

WeightVector read_weights_csv(const std::filesystem::path& path, const SiteInfo& sites) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!next_record(in, line, line_no)) fail(Errc::parse_error, "weights file is empty");
  const auto header = split_csv_line(line);
  std::size_t id_col = header.size();
  std::size_t beta_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = lower(header[c]);
    if (name == "location_id") id_col = c;
    if (name == "beta") beta_col = c;
  }
  if (id_col == header.size() || beta_col == header.size()) {
    parse_fail(line_no, "weights header needs location_id and beta columns");
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sites.size()),
                                                   std::numeric_limits<double>::quiet_NaN());
  while (next_record(in, line, line_no)) {
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) parse_fail(line_no, "field count differs from header");
    const auto it = std::find(sites.ids.begin(), sites.ids.end(), fields[id_col]);
    if (it == sites.ids.end()) {
      fail(Errc::dimension_mismatch, "weights name unknown location '" + fields[id_col] + "'");
    }
    try {
      beta[it - sites.ids.begin()] = parse_double(fields[beta_col]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
  }
  if (beta.hasNaN()) fail(Errc::dimension_mismatch, "weights file does not cover every location");
  return WeightVector(std::move(beta));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      fail(Errc::io_error, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(Errc::io_error, "cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spatavg::io
