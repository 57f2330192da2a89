#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "chopt/io/curve_file.hpp"
#include "chopt/io/format.hpp"
#include "chopt/io/svg_plot.hpp"

using namespace chopt;

TEST(Format, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 2.5e-300, 0.20710678118654752, -7.0, 0.0}) {
    EXPECT_EQ(io::parse_double(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_optional(std::nullopt), "");
  EXPECT_THROW(io::parse_double("0.5x"), Error);
  EXPECT_THROW(io::parse_double(""), Error);
  EXPECT_THROW(io::parse_int("3.5"), Error);
  EXPECT_EQ(io::parse_int("42"), 42);
}

TEST(CurveFile, CsvRoundTripReproducesQ) {
  OptimizerSettings settings;
  settings.sample_count = 20;
  std::vector<OptimumRecord> records = sweep(ratio_grid(0.1, 1.0, 10), Strategy::maxq(), settings);
  const auto nm = sweep(ratio_grid(0.1, 1.0, 10), Strategy::nm(3, 10), settings);
  records.insert(records.end(), nm.begin(), nm.end());
  std::stringstream buffer;
  io::write_csv(buffer, io::to_rows(records));
  EXPECT_EQ(buffer.str().substr(0, buffer.str().find('\n')), io::kCurveHeader);
  const auto rows = io::read_csv(buffer);
  ASSERT_EQ(rows.size(), records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].ratio, records[i].ratio);
    const auto recomputed = ch_q(make_state(rows[i].ratio), io::row_config(rows[i]));
    EXPECT_NEAR(recomputed.q, rows[i].q, 1e-12);
    EXPECT_EQ(rows[i].k.has_value(), records[i].k.has_value());
    EXPECT_EQ(rows[i].eta_crit.has_value(), records[i].report.eta_crit.has_value());
  }
}

TEST(CurveFile, UndefinedCellsAreEmpty) {
  io::CurveRow row;
  row.ratio = 1.0;
  std::stringstream buffer;
  io::write_csv(buffer, {row});
  std::string header, line;
  std::getline(buffer, header);
  std::getline(buffer, line);
  EXPECT_EQ(line, "1,0,,0,0,0,0,0,0,0,0,,,,");
  std::stringstream again(header + "\n" + line + "\n");
  const auto rows = io::read_csv(again);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].eta_crit);
  EXPECT_FALSE(rows[0].k);
}

TEST(CurveFile, RejectsMalformedInput) {
  std::stringstream bad_header("ratio,q\n");
  EXPECT_THROW(io::read_csv(bad_header), Error);
  std::stringstream short_row(std::string(io::kCurveHeader) + "\n0.5,0.1\n");
  EXPECT_THROW(io::read_csv(short_row), Error);
}

TEST(CurveFile, JsonRoundTrip) {
  io::CurveRow row;
  row.ratio = 0.37;
  row.q = 0.0123456789;
  row.eta_crit = 0.777;
  row.phi = {0.1, 0.2, 0.3, 0.4};
  row.nu = {1.1, 1.2, 1.3, 1.4};
  row.k = std::array<int, 4>{1, 2, 3, 4};
  const auto back = io::row_from_json(nlohmann::ordered_json::parse(io::to_json(row).dump()));
  EXPECT_EQ(back.ratio, row.ratio);
  EXPECT_EQ(back.q, row.q);
  EXPECT_EQ(back.eta_crit, row.eta_crit);
  EXPECT_EQ(back.phi, row.phi);
  EXPECT_EQ(back.nu, row.nu);
  EXPECT_EQ(back.k, row.k);
}

TEST(SvgPlot, ContainsAxesSeriesAndGaps) {
  io::Series a{"first", {{0.0, 1.0}, {0.5, NAN}, {1.0, 2.0}}};
  io::Series b{"second <b>", {{0.0, 0.0}, {1.0, 1.0}}};
  std::ostringstream out;
  io::write_svg(out, {"Title", "alpha/beta", "Q"}, {a, b});
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find(">alpha/beta<"), std::string::npos);
  EXPECT_NE(svg.find(">Q<"), std::string::npos);
  EXPECT_NE(svg.find("second &lt;b&gt;"), std::string::npos);
  // The NaN breaks the first series into two move-to segments.
  const auto first_path = svg.substr(svg.find("<path d=\""), svg.find("/>", svg.find("<path d=\"")) - svg.find("<path d=\""));
  EXPECT_EQ(std::count(first_path.begin(), first_path.end(), 'M'), 2);
  std::ostringstream again;
  io::write_svg(again, {"Title", "alpha/beta", "Q"}, {a, b});
  EXPECT_EQ(svg, again.str());
}
