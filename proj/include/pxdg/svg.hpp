#pragma once

#include <string>
#include <vector>

namespace pxdg {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label;
  int width = 720;
  int height = 480;
  bool log_x = false;
  bool log_y = false;
};

/// Line chart as a standalone SVG document built from <polyline> elements.
/// The data of each series is repeated verbatim (17 digits) in a <desc>
/// child so the plotted numbers can be read back.
std::string line_chart(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace pxdg
