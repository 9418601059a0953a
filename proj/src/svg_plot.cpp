#include "mcdbp/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mcdbp {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 24;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 56;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                         "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22"};

double nice_step(double span, int target_ticks) {
  if (span <= 0.0) return 1.0;
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.0) step = 1.0;
  else if (norm <= 2.0) step = 2.0;
  else if (norm <= 5.0) step = 5.0;
  return step * mag;
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.xy) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min > x_max) { x_min = 0; x_max = 1; y_min = 0; y_max = 1; }
  if (x_max == x_min) { x_max += 0.5; x_min -= 0.5; }
  if (y_max == y_min) { y_max += 0.5; y_min -= 0.5; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open plot file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

  // Axes frame and ticks.
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double x_step = nice_step(x_max - x_min, 8);
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9; x += x_step) {
    out << "<line x1=\"" << px(x) << "\" y1=\"" << py(y_min) << "\" x2=\"" << px(x) << "\" y2=\""
        << py(y_min) + 5 << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << px(x) << "\" y1=\"" << kMarginTop << "\" x2=\"" << px(x) << "\" y2=\""
        << kMarginTop + plot_h << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << px(x) << "\" y=\"" << py(y_min) + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(x)
        << "</text>\n";
  }
  const double y_step = nice_step(y_max - y_min, 8);
  for (double y = std::ceil(y_min / y_step) * y_step; y <= y_max + 1e-9; y += y_step) {
    out << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << py(y) << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kMarginLeft << "\" y1=\"" << py(y) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << py(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(y) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt_tick(y)
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
      << "</text>\n"
      << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\""
      << "rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

  // Series.
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& [x, y] : series[s].xy) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [x, y] : series[s].xy)
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.4\" fill=\"" << color
          << "\"/>\n";
  }

  // Legend, top-right inside the frame.
  const double lx = kMarginLeft + plot_w - 170;
  double ly = kMarginTop + 14;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof kColors / sizeof kColors[0])];
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22 << "\" y2=\""
        << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << lx + 28 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[s].label << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
}

}  // namespace mcdbp
