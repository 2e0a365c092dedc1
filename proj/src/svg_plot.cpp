#include "geofriend/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "geofriend/csv.hpp"
#include "geofriend/error.hpp"

namespace geofriend::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

struct Axis {
  bool log = true;
  double lo = 0.0;
  double hi = 1.0;

  double map(double v) const { return log ? std::log10(v) : v; }
  double unit(double v) const { return (map(v) - lo) / (hi - lo); }
};

std::string num(double v) { return csv::general(v, 6); }

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

Axis make_axis(bool log, const std::vector<Series>& series, bool use_x) {
  Axis axis{log, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    for (const double v : use_x ? s.x : s.y) {
      if (std::isfinite(v) && (!log || v > 0.0)) {
        axis.lo = std::min(axis.lo, axis.map(v));
        axis.hi = std::max(axis.hi, axis.map(v));
      }
    }
  }
  if (!std::isfinite(axis.lo)) {
    axis.lo = 0.0;
    axis.hi = 1.0;
  }
  if (log) {
    axis.lo = std::floor(axis.lo);
    axis.hi = std::max(std::ceil(axis.hi), axis.lo + 1.0);
  } else {
    const double pad = axis.hi > axis.lo ? 0.05 * (axis.hi - axis.lo) : 1.0;
    axis.lo = std::min(0.0, axis.lo);
    axis.hi += pad;
  }
  return axis;
}

std::vector<double> ticks(const Axis& axis) {
  std::vector<double> out;
  if (axis.log) {
    for (double e = axis.lo; e <= axis.hi + 1e-9; e += 1.0) {
      out.push_back(std::pow(10.0, e));
    }
    return out;
  }
  const double span = axis.hi - axis.lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw / mag < 2.0 ? 2.0 * mag : (raw / mag < 5.0 ? 5.0 * mag : 10.0 * mag);
  for (double v = std::ceil(axis.lo / step) * step; v <= axis.hi + 1e-9; v += step) {
    out.push_back(v);
  }
  return out;
}

}  // namespace

void Plot::write(std::ostream& out) const {
  const Axis ax = make_axis(log_x, series, true);
  const Axis ay = make_axis(log_y, series, false);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  const auto px = [&](double v) { return kLeft + ax.unit(v) * pw; };
  const auto py = [&](double v) { return kTop + (1.0 - ay.unit(v)) * ph; };
  const auto drawable = [](const Axis& a, double v) { return std::isfinite(v) && (!a.log || v > 0.0); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (const double t : ticks(ax)) {
    const double x = px(t);
    out << "<line x1=\"" << num(x) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(x) << "\" y2=\""
        << kTop + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
        << num(t) << "</text>\n";
  }
  for (const double t : ticks(ay)) {
    const double y = py(t);
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft << "\" y2=\""
        << num(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(t)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(y_label) << "</text>\n";

  double legend_y = kTop + 10;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == Style::Line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (drawable(ax, s.x[i]) && drawable(ay, s.y[i])) {
          out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
        }
      }
      out << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!drawable(ax, s.x[i]) || !drawable(ay, s.y[i])) {
          continue;
        }
        if (s.style == Style::Bars) {
          const double top = py(s.y[i]);
          out << "<line x1=\"" << num(px(s.x[i])) << "\" y1=\"" << kTop + ph << "\" x2=\""
              << num(px(s.x[i])) << "\" y2=\"" << num(top) << "\" stroke=\"" << s.color
              << "\" stroke-width=\"4\"/>\n";
        } else {
          out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
              << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        }
      }
    }
    out << "<rect x=\"" << kWidth - kRight + 12 << "\" y=\"" << legend_y - 8 << "\" width=\"10\" height=\"10\" fill=\""
        << s.color << "\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 28 << "\" y=\"" << legend_y + 1 << "\">" << escape(s.label)
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
}

void Plot::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  }
  write(out);
}

}  // namespace geofriend::svg
