#pragma once

#include <string>
#include <utility>
#include <vector>

namespace mcdbp {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> xy;
};

// Static SVG line plot: framed axes, nice-number ticks, legend, one polyline
// per series.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace mcdbp
