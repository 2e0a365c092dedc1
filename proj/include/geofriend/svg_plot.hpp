#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace geofriend::svg {

enum class Style { Markers, Line, Bars };

struct Series {
  std::string label;
  std::string color;
  Style style = Style::Markers;
  std::vector<double> x;
  std::vector<double> y;
};

// Static scatter/line plot. Points that cannot be drawn on a log axis
// (non-positive values) are skipped.
struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  std::vector<Series> series;

  void write(std::ostream& out) const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace geofriend::svg
