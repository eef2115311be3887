#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ucpoint {

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotCurve {
  std::string label;
  std::string color;
  std::function<double(double)> f;
};

struct ScatterPlot {
  std::string title;
  std::string x_label = "size (UCP)";
  std::string y_label = "effort (person-hours)";
  std::vector<PlotPoint> points;
  std::vector<PlotCurve> curves;
  bool log_y = true;
  int width = 800;
  int height = 560;
};

// Standalone SVG document. Each data point becomes one <circle
// class="point">; each curve one or more <polyline class="curve">.
// On a log axis, non-positive values are left out.
std::string render_svg(const ScatterPlot& plot);

}  // namespace ucpoint
