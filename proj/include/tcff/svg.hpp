#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tcff/common.hpp"

namespace tcff {

struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal static line chart; display-only companion to the CSV output.
inline void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                            const std::string& x_label, const std::string& y_label,
                            const std::vector<SvgSeries>& series, bool log_x = false,
                            bool log_y = false) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  const double w = 820, h = 560, ml = 80, mr = 30, mt = 50, mb = 60;

  auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (log_y && s.y[i] <= 0.0) continue;
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (xmin > xmax) return;  // nothing plottable
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  auto px = [&](double v) { return ml + (tx(v) - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto py = [&](double v) { return h - mb - (ty(v) - ymin) / (ymax - ymin) * (h - mt - mb); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open svg output: " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
  out << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n";
  out << "<text x='" << w / 2 << "' y='" << h - 16 << "' text-anchor='middle' font-size='12'>"
      << x_label << (log_x ? " (log)" : "") << "</text>\n";
  out << "<text x='18' y='" << h / 2 << "' font-size='12' transform='rotate(-90 18 " << h / 2
      << ")' text-anchor='middle'>" << y_label << (log_y ? " (log)" : "") << "</text>\n";

  auto label = [&](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };
  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double vx = log_x ? std::pow(10.0, fx) : fx;
    const double vy = log_y ? std::pow(10.0, fy) : fy;
    const double gx = ml + (w - ml - mr) * i / 4.0;
    const double gy = h - mb - (h - mt - mb) * i / 4.0;
    out << "<text x='" << gx << "' y='" << h - mb + 16
        << "' text-anchor='middle' font-size='10'>" << label(vx) << "</text>\n";
    out << "<text x='" << ml - 6 << "' y='" << gy + 4 << "' text-anchor='end' font-size='10'>"
        << label(vy) << "</text>\n";
  }

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 8];
    out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      if (log_y && series[s].y[i] <= 0.0) continue;
      out << px(series[s].x[i]) << "," << py(series[s].y[i]) << " ";
    }
    out << "'/>\n";
    out << "<text x='" << w - mr - 150 << "' y='" << mt + 16 * (s + 1) << "' font-size='11' fill='"
        << color << "'>" << series[s].name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace tcff
