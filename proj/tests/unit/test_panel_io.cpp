#include "spatavg/error.hpp"
#include "spatavg/panel_io.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <cstring>
#include <sstream>

namespace spatavg {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spatavg_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Errc parse_error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)io::read_panel_csv(in);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return Errc::io_error;
}

TEST(PanelCsv, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Eigen::MatrixXd r(4, 9);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = u(rng) / 3.0;
  r(0, 0) = 1e-300;
  r(1, 1) = -0.0;
  std::vector<Coord> coords = {{8.1, 68.2}, {9.0 / 7.0, 70.0}, {30.5, 90.25}, {-1.0, 1e-5}};
  const ObservationPanel p(r, {"a", "b", "c", "d"},
                           {"1", "2", "3", "4", "5", "6", "7", "8", "9"}, coords);
  std::stringstream ss;
  io::write_panel_csv(ss, p);
  const ObservationPanel q = io::read_panel_csv(ss);
  ASSERT_EQ(q.n_sites(), 4);
  ASSERT_EQ(q.n_steps(), 9);
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    EXPECT_EQ(std::memcmp(&r.data()[i], &q.values().data()[i], sizeof(double)), 0) << i;
  }
  EXPECT_EQ(q.location_ids(), p.location_ids());
  EXPECT_EQ(q.time_ids(), p.time_ids());
  EXPECT_EQ(*q.coords(), coords);
}

TEST(PanelCsv, CoordinatesMayBeOmittedEverywhere) {
  std::istringstream in(
      "# comment\nlocation_id,lat,lon,t1,t2\n\nx,,,1,2\ny,,,3,4.5\n");
  const ObservationPanel p = io::read_panel_csv(in);
  EXPECT_FALSE(p.coords().has_value());
  EXPECT_EQ(p.values()(1, 1), 4.5);
}

TEST(PanelCsv, RejectsMalformedInput) {
  EXPECT_EQ(parse_error_of(""), Errc::parse_error);
  EXPECT_EQ(parse_error_of("id,lat,lon,t1\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_of("location_id,lat,lon,t1,t2\nx,1,2,3\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_of("location_id,lat,lon,t1,t2\nx,1,2,3,abc\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_of("location_id,lat,lon,t1,t2\nx,1,2,3,4\ny,,,5,6\n"), Errc::parse_error);
  EXPECT_EQ(parse_error_of("location_id,lat,lon,t1,t2\nx,1,2,3,nan\n"), Errc::non_finite_value);
  EXPECT_EQ(parse_error_of("location_id,lat,lon,t1\nx,1,2,3\n"), Errc::degenerate_panel);
}

TEST(PanelCsv, MissingFileIsAnIoError) {
  try {
    (void)io::read_panel_csv(fs::path("/nonexistent/panel.csv"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::io_error);
  }
}

TEST(TruthCsv, RoundTripWithTimeIds) {
  Eigen::VectorXd v(3);
  v << 7.25, 1.0 / 3.0, -2.0;
  std::stringstream ss;
  io::write_truth_csv(ss, TruthSeries(v), {"jun1", "jun2", "jun3"});
  EXPECT_NE(ss.str().find("jun2,"), std::string::npos);
  const TruthSeries t = io::read_truth_csv(ss);
  EXPECT_EQ(t.values(), v);

  std::istringstream bad("time,value\n1,2\n");
  EXPECT_THROW((void)io::read_truth_csv(bad), Error);
}

TEST(WeightsCsv, MatchedByLocationId) {
  const fs::path dir = scratch_dir("weights");
  {
    std::ofstream out(dir / "w.csv");
    out << "# produced elsewhere\nbeta,location_id,rho\n0.75,b,0\n0.25,a,1\n";
  }
  SiteInfo sites{{"a", "b"}, std::nullopt};
  const WeightVector w = io::read_weights_csv(dir / "w.csv", sites);
  EXPECT_EQ(w[0], 0.25);
  EXPECT_EQ(w[1], 0.75);

  SiteInfo more{{"a", "b", "c"}, std::nullopt};
  EXPECT_THROW((void)io::read_weights_csv(dir / "w.csv", more), Error);
  SiteInfo other{{"a", "z"}, std::nullopt};
  EXPECT_THROW((void)io::read_weights_csv(dir / "w.csv", other), Error);
}

TEST(Numbers, FormatParseRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 7.000000000000001, -1e-310, 6.02214076e23}) {
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::parse_double("+2.5"), 2.5);
  EXPECT_THROW((void)io::parse_double("1.5x"), Error);
  EXPECT_THROW((void)io::parse_double(""), Error);
}

TEST(AtomicWrite, LeavesNoTemporaryFile) {
  const fs::path dir = scratch_dir("atomic");
  io::write_file_atomic(dir / "out.csv", "a,b\n");
  EXPECT_EQ(io::read_file(dir / "out.csv"), "a,b\n");
  EXPECT_FALSE(fs::exists(dir / "out.csv.tmp"));
  EXPECT_THROW(io::write_file_atomic(dir / "missing" / "out.csv", "x"), Error);
}

}  // namespace
}  // namespace spatavg
