#pragma once

#include <string>

#include "collapselab/stats.hpp"

namespace collapselab {

struct PlotOptions {
  int width = 860;
  int height = 520;
  bool log_y = false;
  std::string title;
};

// Self-contained SVG 1.1 document: mean risk line, shaded 95% band, dashed
// analytic overlay when present, axes with ticks. Presentation only; no
// effect on any computed output.
std::string render_trajectory_svg(const RiskTrajectory& traj, const PlotOptions& options = {});

}  // namespace collapselab
