#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alp/io.hpp"
#include "alp/workspace.hpp"

namespace alp {

/// One drawn path: the nominal reference with its tube radius and the
/// executed trace on top of it.
struct SvgPath {
  std::vector<Eigen::Vector2d> nominal;
  std::vector<Eigen::Vector2d> executed;
  double tube_radius = 0.0;
  std::string label;
};

/// Overlay plot of a campaign: obstacles, tube ribbons, nominal and
/// executed paths per execution.
inline std::string campaign_svg(const Workspace& workspace, const std::vector<SvgPath>& paths) {
  const double scale = 60.0;
  const double margin = 20.0;
  const Eigen::VectorXd lo = workspace.bounds.lo, hi = workspace.bounds.hi;
  const double w = (hi[0] - lo[0]) * scale + 2 * margin;
  const double h = (hi[1] - lo[1]) * scale + 2 * margin;
  auto X = [&](double x) { return margin + (x - lo[0]) * scale; };
  auto Y = [&](double y) { return h - margin - (y - lo[1]) * scale; };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#17becf", "#bcbd22"};
  const int ncolors = 9;

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"white\"/>\n";
  out += "<rect x=\"" + num(X(lo[0])) + "\" y=\"" + num(Y(hi[1])) + "\" width=\"" +
         num((hi[0] - lo[0]) * scale) + "\" height=\"" + num((hi[1] - lo[1]) * scale) +
         "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1.5\"/>\n";

  for (const auto& o : workspace.obstacles) {
    out += "<rect x=\"" + num(X(o.lo[0])) + "\" y=\"" + num(Y(o.hi[1])) + "\" width=\"" +
           num((o.hi[0] - o.lo[0]) * scale) + "\" height=\"" + num((o.hi[1] - o.lo[1]) * scale) +
           "\" fill=\"#888\" stroke=\"#555\"/>\n";
  }

  auto polyline = [&](const std::vector<Eigen::Vector2d>& pts, const std::string& style) {
    if (pts.size() < 2) return std::string();
    std::string p = "<polyline fill=\"none\" " + style + " points=\"";
    for (const auto& q : pts) p += num(X(q[0])) + "," + num(Y(q[1])) + " ";
    p += "\"/>\n";
    return p;
  };

  // tube ribbons first so the paths stay visible
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    const std::string color = palette[i % ncolors];
    if (p.tube_radius > 0.0) {
      out += polyline(p.nominal, "stroke=\"" + color + "\" stroke-opacity=\"0.15\" stroke-width=\"" +
                                     num(2.0 * p.tube_radius * scale) +
                                     "\" stroke-linejoin=\"round\" stroke-linecap=\"round\"");
    }
  }
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    const std::string color = palette[i % ncolors];
    out += polyline(p.nominal, "stroke=\"" + color + "\" stroke-width=\"2\" stroke-dasharray=\"6 3\"");
    out += polyline(p.executed, "stroke=\"" + color + "\" stroke-width=\"1.2\"");
    if (!p.nominal.empty()) {
      out += "<text x=\"" + num(X(p.nominal.front()[0]) + 4) + "\" y=\"" +
             num(Y(p.nominal.front()[1]) - 4 - 12.0 * static_cast<double>(i)) +
             "\" font-size=\"11\" fill=\"" + color + "\">" + p.label + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace alp
