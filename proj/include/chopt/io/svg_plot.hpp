#pragma once

// Minimal single-panel line chart writer.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace chopt::io {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // gaps are allowed: NaN y breaks the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 450;
};

namespace detail {

inline std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Roughly five "nice" tick values covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) out.push_back(v);
  return out;
}

}  // namespace detail

inline void write_svg(std::ostream& out, const PlotSpec& spec, const std::vector<Series>& series) {
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#000000", "#e377c2", "#ff7f0e", "#9467bd"};
  const double left = 70, right = 160, top = 40, bottom = 55;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };
  using detail::fixed;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << detail::escape(spec.title) << "</text>\n";
  out << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(pw) << "\" height=\""
      << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : detail::ticks(xmin, xmax)) {
    out << "<line x1=\"" << fixed(sx(t)) << "\" y1=\"" << fixed(top + ph) << "\" x2=\"" << fixed(sx(t)) << "\" y2=\""
        << fixed(top + ph + 5) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << fixed(sx(t)) << "\" y=\"" << fixed(top + ph + 18) << "\" text-anchor=\"middle\">"
        << fixed(t) << "</text>\n";
  }
  for (double t : detail::ticks(ymin, ymax)) {
    out << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(t)) << "\" x2=\"" << fixed(left) << "\" y2=\""
        << fixed(sy(t)) << "\" stroke=\"black\"/>";
    out << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(t) + 4) << "\" text-anchor=\"end\">"
        << fixed(t, 3) << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(spec.height - 12.0)
      << "\" text-anchor=\"middle\">" << detail::escape(spec.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << fixed(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << detail::escape(spec.y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % (sizeof palette / sizeof *palette)];
    std::string path;
    bool pen_down = false;
    for (const auto& [x, y] : series[i].points) {
      if (!std::isfinite(y)) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + fixed(sx(x)) + ',' + fixed(sy(y));
      pen_down = true;
    }
    out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 15 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << fixed(left + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(left + pw + 36)
        << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
    out << "<text x=\"" << fixed(left + pw + 42) << "\" y=\"" << fixed(ly + 4) << "\">"
        << detail::escape(series[i].label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace chopt::io
