#pragma once

#include <string>
#include <vector>

namespace sh {

struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  bool line = false;  // scatter unless set
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

// Deterministic standalone SVG scatter/line plot. Axis transforms (log,
// sign flips) are the caller's job; values arrive ready to draw.
std::string render_svg(const PlotSpec& spec);
void write_svg(const PlotSpec& spec, const std::string& path);

}  // namespace sh
