#pragma once

// Minimal self-contained SVG line and scatter charts.

#include <string>
#include <vector>

namespace pado {

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
  bool markers_only = false;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool log_x = false;
  bool log_y = false;
  int width = 720, height = 440;
};

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);
void write_svg(const std::string& path, const PlotSpec& spec,
               const std::vector<PlotSeries>& series);

}  // namespace pado
