#include "backsched/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace backsched {

namespace {

constexpr double kWidth = 960, kHeight = 360;
constexpr double kLeft = 50, kRight = 20, kTop = 28, kBottom = 34;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  const double period = spec.period.period_hours;
  double y_max = 0.0;
  for (const auto& s : spec.series)
    for (double v : s.values) y_max = std::max(y_max, v);
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.05;

  auto x_of = [&](double t) { return kLeft + t / period * kPlotW; };
  auto y_of = [&](double v) { return kTop + (1.0 - v / y_max) * kPlotH; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  if (!spec.title.empty())
    svg << "<text x=\"" << kLeft << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(spec.title) << "</text>\n";

  // Existing windows as translucent bands (split when they wrap).
  for (const auto& w : spec.bands) {
    double s = spec.period.wrap(w.center - w.width / 2.0);
    double e = s + w.width;
    auto band = [&](double a, double b) {
      svg << "<rect x=\"" << fmt(x_of(a)) << "\" y=\"" << kTop << "\" width=\""
          << fmt(x_of(b) - x_of(a)) << "\" height=\"" << kPlotH
          << "\" fill=\"#9ecae1\" fill-opacity=\"0.35\"/>\n";
    };
    if (e <= period) band(s, e);
    else { band(s, period); band(0.0, e - period); }
  }

  // Day grid and axis labels.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (double t = 0.0; t < period + 1e-9; t += kDayHours) {
    double x = x_of(std::min(t, period));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\""
        << kTop + kPlotH << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    if (t < period - 1e-9)
      svg << "<text x=\"" << fmt(x + 3) << "\" y=\"" << kTop + kPlotH + 16 << "\">"
          << xml_escape(spec.period.format(t)) << "</text>\n";
  }
  svg << "</g>\n";

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlotW << "\" height=\""
      << kPlotH << "\" fill=\"none\" stroke=\"#888\"/>\n";

  for (const auto& s : spec.series) {
    if (s.values.empty()) continue;
    const int n = static_cast<int>(s.values.size());
    svg << "<path fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " d=\"";
    for (int j = 0; j < n; ++j) {
      double t = period * j / n;
      svg << (j == 0 ? "M" : "L") << fmt(x_of(t)) << "," << fmt(y_of(s.values[j]));
    }
    svg << "\"/>\n";
  }

  for (double m : spec.markers) {
    double x = x_of(spec.period.wrap(m));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\""
        << kTop + kPlotH << "\" stroke=\"#d62728\" stroke-width=\"1\" stroke-dasharray=\"2 3\"/>\n"
        << "<circle cx=\"" << fmt(x) << "\" cy=\"" << kTop + 8 << "\" r=\"4\" fill=\"#d62728\"/>\n";
  }

  // Legend.
  double ly = kTop + 14;
  for (const auto& s : spec.series) {
    if (s.label.empty()) continue;
    svg << "<line x1=\"" << kLeft + kPlotW - 170 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + kPlotW - 146 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n"
        << "<text x=\"" << kLeft + kPlotW - 140 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(s.label)
        << "</text>\n";
    ly += 16;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace backsched
