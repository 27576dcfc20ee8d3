#pragma once

// Minimal self-contained SVG line charts for density/preference curves over
// one period, with existing windows drawn as shaded bands and placed centers
// as markers. No plotting dependency; fixed 960x360 canvas.

#include <string>
#include <vector>

#include "backsched/schedule.hpp"

namespace backsched {

struct PlotSeries {
  std::vector<double> values;  // sampled on a uniform grid over [0, P)
  std::string label;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotSpec {
  PeriodConfig period;
  std::vector<PlotSeries> series;
  std::vector<JobWindow> bands;    // shaded existing windows
  std::vector<double> markers;     // placed centers, hours in [0, P)
  std::string title;
};

std::string render_svg(const PlotSpec& spec);

}  // namespace backsched
