#include "collapselab/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace collapselab {

namespace {

std::string fmt(double v) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

struct Mapper {
  double x0, x1, y0, y1;      // data ranges
  double px0, px1, py0, py1;  // pixel ranges (py0 is the bottom)
  bool log_y;

  double x(double v) const { return px0 + (v - x0) / (x1 - x0) * (px1 - px0); }
  double y(double v) const {
    const double t = log_y ? (std::log10(v) - std::log10(y0)) / (std::log10(y1) - std::log10(y0))
                           : (v - y0) / (y1 - y0);
    return py0 - t * (py0 - py1);
  }
};

void polyline(std::ostringstream& out, const Mapper& map, const std::vector<double>& ys,
              const std::string& style) {
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (std::size_t t = 0; t < ys.size(); ++t) {
    out << fmt(map.x(static_cast<double>(t))) << ',' << fmt(map.y(ys[t])) << ' ';
  }
  out << "\"/>\n";
}

}  // namespace

std::string render_trajectory_svg(const RiskTrajectory& traj, const PlotOptions& options) {
  if (traj.mean.empty()) throw std::invalid_argument("empty trajectory");
  const std::size_t rounds = traj.mean.size();

  double lo = traj.ci_lo[0], hi = traj.ci_hi[0];
  for (std::size_t t = 0; t < rounds; ++t) {
    lo = std::min(lo, traj.ci_lo[t]);
    hi = std::max(hi, traj.ci_hi[t]);
  }
  for (double v : traj.analytic) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool log_y = options.log_y;
  if (log_y && lo <= 0.0) log_y = false;  // log scale needs positive values
  if (!log_y) {
    const double pad = 0.05 * std::max(hi - lo, 1e-12);
    lo = lo - pad;
    hi = hi + pad;
  } else {
    lo *= 0.9;
    hi *= 1.1;
  }
  if (hi <= lo) hi = lo + 1.0;

  const double margin_left = 72, margin_right = 20, margin_top = 36, margin_bottom = 48;
  Mapper map{0.0,
             static_cast<double>(rounds - 1),
             lo,
             hi,
             margin_left,
             options.width - margin_right,
             options.height - margin_bottom,
             margin_top,
             log_y};
  if (rounds == 1) map.x1 = 1.0;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << options.width
      << "\" height=\"" << options.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Confidence band as a closed polygon: upper edge forward, lower edge back.
  out << "<polygon fill=\"#4878cf\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
  for (std::size_t t = 0; t < rounds; ++t) {
    out << fmt(map.x(static_cast<double>(t))) << ',' << fmt(map.y(traj.ci_hi[t])) << ' ';
  }
  for (std::size_t t = rounds; t-- > 0;) {
    out << fmt(map.x(static_cast<double>(t))) << ',' << fmt(map.y(traj.ci_lo[t])) << ' ';
  }
  out << "\"/>\n";

  polyline(out, map, traj.mean, "stroke=\"#29529e\" stroke-width=\"1.6\"");
  if (!traj.analytic.empty()) {
    polyline(out, map, traj.analytic,
             "stroke=\"#c0392b\" stroke-width=\"1.4\" stroke-dasharray=\"6,4\"");
  }

  // Axes.
  out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(map.py0) << "\" x2=\""
      << fmt(map.px1) << "\" y2=\"" << fmt(map.py0) << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(map.py0) << "\" x2=\""
      << fmt(margin_left) << "\" y2=\"" << fmt(map.py1) << "\" stroke=\"black\"/>\n";

  const int x_ticks = std::min<std::size_t>(8, rounds);
  for (int i = 0; i < x_ticks; ++i) {
    const double tv = map.x0 + (map.x1 - map.x0) * i / std::max(1, x_ticks - 1);
    const double px = map.x(tv);
    out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(map.py0) << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << fmt(map.py0 + 5) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(map.py0 + 20)
        << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << static_cast<long long>(std::llround(tv)) << "</text>\n";
  }
  const int y_ticks = 6;
  for (int i = 0; i < y_ticks; ++i) {
    const double frac = static_cast<double>(i) / (y_ticks - 1);
    const double tv = log_y ? std::pow(10.0, std::log10(lo) + frac * (std::log10(hi) - std::log10(lo)))
                            : lo + frac * (hi - lo);
    const double py = map.y(tv);
    out << "<line x1=\"" << fmt(margin_left - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
        << fmt(margin_left) << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(margin_left - 8) << "\" y=\"" << fmt(py + 4)
        << "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" << fmt(tv)
        << "</text>\n";
  }

  out << "<text x=\"" << fmt((margin_left + map.px1) / 2) << "\" y=\""
      << fmt(options.height - 12)
      << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">round t</text>\n";
  out << "<text x=\"" << fmt(margin_left) << "\" y=\"20\" font-size=\"12\" "
         "font-family=\"sans-serif\">"
      << (options.title.empty() ? ("mean risk, " + std::to_string(traj.reps) + " replications")
                                : options.title)
      << (log_y ? " (log y)" : "") << "</text>\n";
  if (!traj.analytic.empty()) {
    out << "<text x=\"" << fmt(map.px1 - 170) << "\" y=\"20\" font-size=\"11\" fill=\"#c0392b\" "
           "font-family=\"sans-serif\">dashed: analytic recurrence</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace collapselab
