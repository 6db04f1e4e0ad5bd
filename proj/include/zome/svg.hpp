#pragma once

// SVG (and optional tikz) rendering of a solution: grey sample boxes with the
// origin box darker, the input contour in black, the sample polyline in
// green, struts in their catalog colors.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "zome/arrange.hpp"
#include "zome/field.hpp"
#include "zome/golden.hpp"

namespace zome {

namespace detail {

inline const char* strut_color_css(StrutColor c) {
  switch (c) {
    case StrutColor::Blue: return "#1f62c4";
    case StrutColor::Red: return "#d0342c";
    case StrutColor::Yellow: return "#d9a514";
    default: return "#7d3bbd";
  }
}

}  // namespace detail

struct RenderOptions {
  double margin = 2.0;
  double stroke = 0.12;
  double pixels_per_unit = 24.0;
};

inline std::string render_svg(const ZomeCycle& cycle, const ContourPolyline& contour,
                              const std::vector<Vec2>& samples, double delta,
                              const StrutCatalog& cat, const RenderOptions& opt = {}) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto grow = [&](const Vec2& p) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  };
  for (const Vec2& p : contour.points) grow(p);
  for (const Vec2& p : samples) {
    grow({p.x - delta, p.y - delta});
    grow({p.x + delta, p.y + delta});
  }
  for (const auto& seg : cycle.segments)
    for (const PlacedStrut& s : seg) {
      grow(s.start);
      grow(s.end);
    }
  if (xmin > xmax) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  xmin -= opt.margin;
  ymin -= opt.margin;
  xmax += opt.margin;
  ymax += opt.margin;

  std::ostringstream os;
  os.precision(6);
  const double w = (xmax - xmin) * opt.pixels_per_unit;
  const double h = (ymax - ymin) * opt.pixels_per_unit;
  // plane y points up; flip into SVG screen coordinates
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"" << xmin << " " << -ymax << " " << (xmax - xmin) << " " << (ymax - ymin)
     << "\">\n"
     << "<g transform=\"scale(1,-1)\">\n";

  // sample boxes; the box containing the construction origin is darker
  const Vec2 origin_node = cycle.nodes.empty() ? cycle.shift : cycle.nodes.front();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec2& p = samples[i];
    const bool has_origin = std::fabs(origin_node.x - p.x) <= delta + 1e-9 &&
                            std::fabs(origin_node.y - p.y) <= delta + 1e-9 && i == 0;
    os << "<rect x=\"" << p.x - delta << "\" y=\"" << p.y - delta << "\" width=\"" << 2 * delta
       << "\" height=\"" << 2 * delta << "\" fill=\"" << (has_origin ? "#9a9a9a" : "#d4d4d4")
       << "\" fill-opacity=\"0.8\"/>\n";
  }

  auto polyline = [&os, &opt](const std::vector<Vec2>& pts, bool closed, const char* color,
                              double width_scale) {
    if (pts.empty()) return;
    os << "<path d=\"M " << pts[0].x << " " << pts[0].y;
    for (std::size_t i = 1; i < pts.size(); ++i) os << " L " << pts[i].x << " " << pts[i].y;
    if (closed) os << " Z";
    os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << opt.stroke * width_scale << "\"/>\n";
  };
  polyline(contour.points, contour.closed, "#000000", 1.0);
  polyline(samples, true, "#1f9e46", 0.8);

  for (const auto& seg : cycle.segments)
    for (const PlacedStrut& s : seg) {
      const StrutColor c = cat.struts[static_cast<std::size_t>(s.strut.type)].color;
      os << "<line x1=\"" << s.start.x << "\" y1=\"" << s.start.y << "\" x2=\"" << s.end.x
         << "\" y2=\"" << s.end.y << "\" stroke=\"" << detail::strut_color_css(c)
         << "\" stroke-width=\"" << opt.stroke * 2.0 << "\" stroke-linecap=\"round\"/>\n";
    }
  os << "</g>\n</svg>\n";
  return os.str();
}

// tikz flavor of the same picture, for LaTeX-side comparison.
inline std::string render_tikz(const ZomeCycle& cycle, const ContourPolyline& contour,
                               const std::vector<Vec2>& samples, double delta,
                               const StrutCatalog& cat) {
  std::ostringstream os;
  os.precision(6);
  os << "\\begin{tikzpicture}[scale=0.25]\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec2& p = samples[i];
    os << "\\fill[" << (i == 0 ? "black!35" : "black!15") << "] (" << p.x - delta << ","
       << p.y - delta << ") rectangle (" << p.x + delta << "," << p.y + delta << ");\n";
  }
  if (!contour.points.empty()) {
    os << "\\draw[black]";
    for (std::size_t i = 0; i < contour.points.size(); ++i)
      os << (i ? " -- " : " ") << "(" << contour.points[i].x << "," << contour.points[i].y << ")";
    if (contour.closed) os << " -- cycle";
    os << ";\n";
  }
  for (const auto& seg : cycle.segments)
    for (const PlacedStrut& s : seg) {
      const StrutColor c = cat.struts[static_cast<std::size_t>(s.strut.type)].color;
      const char* name = c == StrutColor::Blue ? "blue"
                         : c == StrutColor::Red ? "red"
                         : c == StrutColor::Yellow ? "yellow!70!black"
                                                   : "violet";
      os << "\\draw[" << name << ",line width=0.8pt] (" << s.start.x << "," << s.start.y
         << ") -- (" << s.end.x << "," << s.end.y << ");\n";
    }
  os << "\\end{tikzpicture}\n";
  return os.str();
}

}  // namespace zome
