#pragma once

// Minimal line-plot SVG writer. Output depends only on the input values.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cantisq/io/trace.hpp"
#include "cantisq/status.hpp"

namespace cantisq::io {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> threshold;  // horizontal guide line
  std::vector<PlotSeries> series;
  std::optional<double> y_max;      // clip the y range (growing curves)
};

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace svg_detail

inline std::string emit_svg(const PlotSpec& plot) {
  using svg_detail::num;
  for (const auto& s : plot.series)
    if (s.x.size() < 2 || s.x.size() != s.y.size())
      throw ValidationError("emit_svg: every series needs at least 2 points");
  if (plot.series.empty()) throw ValidationError("emit_svg: no series");

  constexpr double W = 640, H = 420, left = 70, right = 20, top = 40, bottom = 55;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (plot.threshold) {
    y0 = std::min(y0, *plot.threshold);
    y1 = std::max(y1, *plot.threshold);
  }
  if (plot.y_max) y1 = std::min(y1, *plot.y_max);
  y0 = std::min(y0, 0.0);
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (std::clamp(y, y0, y1) - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
       "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
       svg_detail::escape(plot.title) + "</text>\n";
  // Axes box and ticks.
  o += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
       "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    o += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(top + ph + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + svg_detail::tick(xv) + "</text>\n";
    o += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + svg_detail::tick(yv) + "</text>\n";
  }
  o += "<text x=\"" + num(left + pw / 2) + "\" y=\"" + num(H - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + svg_detail::escape(plot.x_label) +
       "</text>\n";
  o += "<text x=\"16\" y=\"" + num(top + ph / 2) + "\" transform=\"rotate(-90 16 " + num(top + ph / 2) +
       ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + svg_detail::escape(plot.y_label) +
       "</text>\n";
  if (plot.threshold) {
    o += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(*plot.threshold)) + "\" x2=\"" + num(left + pw) +
         "\" y2=\"" + num(py(*plot.threshold)) + "\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n";
  }
  for (const auto& s : plot.series) {
    o += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"";
    if (s.dashed) o += " stroke-dasharray=\"6,4\"";
    o += " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o += num(px(s.x[i])) + "," + num(py(s.y[i])) + (i + 1 < s.x.size() ? " " : "");
    }
    o += "\"><title>" + svg_detail::escape(s.label) + "</title></polyline>\n";
  }
  o += "</svg>\n";
  return o;
}

/// Plots a two-curve trace: `solid` and `dashed` columns against `x`.
inline std::string emit_svg(const TraceFile& trace, const std::string& x, const std::string& solid,
                            const std::string& dashed, std::optional<double> threshold,
                            const std::string& title, const std::string& y_label,
                            std::optional<double> y_max = std::nullopt) {
  if (trace.rows.size() < 2) throw ValidationError("emit_svg: trace needs at least 2 points");
  PlotSpec p;
  p.title = title;
  p.x_label = x;
  p.y_label = y_label;
  p.threshold = threshold;
  p.y_max = y_max;
  p.series.push_back({solid, trace.numeric_column(x), trace.numeric_column(solid), false});
  p.series.push_back({dashed, trace.numeric_column(x), trace.numeric_column(dashed), true});
  return emit_svg(p);
}

}  // namespace cantisq::io
