#pragma once

#include <array>
#include <string>
#include <vector>

namespace chariot {

struct PlotSeries {
  std::string label;
  std::vector<std::array<double, 2>> points;
};

enum class PlotKind { path_overlay, convergence, ratio_histogram };

struct PlotLabels {
  std::string title;
  std::string x_axis;
  std::string y_axis;
};

/// Self-contained SVG document. path_overlay draws polylines on linear axes, convergence
/// draws marked polylines on log-log axes, ratio_histogram bins the x values of each series.
/// Output depends only on the inputs.
std::string emit_svg_plot(const std::vector<PlotSeries>& series, PlotKind kind,
                          const PlotLabels& labels = {});

}  // namespace chariot
