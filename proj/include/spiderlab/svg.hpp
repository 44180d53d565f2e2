#pragma once

#include <charconv>
#include <string>

#include "spiderlab/charges.hpp"
#include "spiderlab/control.hpp"
#include "spiderlab/morse.hpp"
#include "spiderlab/workspace.hpp"

// Deterministic SVG emission: fixed formatting (shortest round-trip numbers),
// fixed element order, model coordinates with the y axis flipped at emission.

namespace spider::svg {

inline std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string document(Rect box, const std::string& body) {
  Rect padded = box.padded(0.05 * std::max(box.width(), box.height()));
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(padded.lo.x) + " " +
         fmt(-padded.hi.y) + " " + fmt(padded.width()) + " " + fmt(padded.height()) + "\">\n";
  out += body;
  out += "</svg>\n";
  return out;
}

inline std::string coords(Point p) { return fmt(p.x) + " " + fmt(-p.y); }

// One subpath per boundary component, arcs in traversal order. Model-CCW
// arcs become sweep 0 under the y flip.
inline std::string workspace_path_data(const Workspace& w) {
  std::string d;
  for (const BoundaryComponent& comp : w.components) {
    for (size_t k = 0; k < comp.arcs.size(); ++k) {
      const BoundaryArc& arc = w.arcs[comp.arcs[k]];
      const ConstraintCircle& c = w.circles[arc.circle];
      bool ccw = c.kind == CircleKind::outer;
      std::string r = fmt(c.radius);
      if (arc.full) {
        Point p0 = c.at(0.0), p1 = c.at(std::numbers::pi);
        std::string sweep = ccw ? "0" : "1";
        d += "M " + coords(p0) + " ";
        d += "A " + r + " " + r + " 0 0 " + sweep + " " + coords(p1) + " ";
        d += "A " + r + " " + r + " 0 0 " + sweep + " " + coords(p0) + " Z ";
        continue;
      }
      double from = ccw ? arc.theta0 : arc.theta1;
      double to = ccw ? arc.theta1 : arc.theta0;
      if (k == 0) d += "M " + coords(c.at(from)) + " ";
      std::string large = arc.span() > std::numbers::pi ? "1" : "0";
      std::string sweep = ccw ? "0" : "1";
      d += "A " + r + " " + r + " 0 " + large + " " + sweep + " " + coords(c.at(to)) + " ";
    }
    if (!comp.arcs.empty() && !w.arcs[comp.arcs[0]].full) d += "Z ";
  }
  if (!d.empty() && d.back() == ' ') d.pop_back();
  return d;
}

inline std::string triangle_outline(const Triangle& t) {
  return "<path d=\"M " + coords(t.a) + " L " + coords(t.b) + " L " + coords(t.c) +
         " Z\" fill=\"none\" stroke=\"#888888\" stroke-width=\"0.01\"/>\n";
}

}  // namespace detail

inline std::string render_workspace(const Workspace& w) {
  std::string body;
  body += "<path d=\"" + detail::workspace_path_data(w) +
          "\" fill=\"#cfe2f3\" fill-rule=\"evenodd\" stroke=\"#1f4e79\" stroke-width=\"0.01\"/>\n";
  body += detail::triangle_outline(w.feet);
  for (const Corner& c : w.corners)
    body += "<circle cx=\"" + fmt(c.at.x) + "\" cy=\"" + fmt(-c.at.y) +
            "\" r=\"0.02\" fill=\"#1f4e79\"/>\n";
  return detail::document(w.bounds(), body);
}

// An empty region renders as a valid document with no shape elements.
inline std::string render_region(const Region& region, const Triangle& tri) {
  Rect box = tri.bounds();
  if (region.empty()) return detail::document(box, "");
  std::string cells;
  double s = region.resolution;
  for (Point p : region.sample) {
    box = bounds_union(box, Rect{p, p});
    cells += "M " + fmt(p.x - s / 2) + " " + fmt(-p.y - s / 2) + " h " + fmt(s) + " v " + fmt(s) +
             " h -" + fmt(s) + " Z ";
  }
  if (!cells.empty() && cells.back() == ' ') cells.pop_back();
  std::string body = "<path d=\"" + cells + "\" fill=\"#b6d7a8\"/>\n";
  body += detail::triangle_outline(tri);
  return detail::document(box, body);
}

inline std::string render_trajectory(const Workspace& w, const Trajectory& t) {
  std::string body;
  body += "<path d=\"" + detail::workspace_path_data(w) +
          "\" fill=\"#f3f3f3\" fill-rule=\"evenodd\" stroke=\"#999999\" stroke-width=\"0.008\"/>\n";
  size_t i = 0;
  while (i < t.segments.size()) {
    size_t j = i;
    while (j < t.segments.size() && t.segments[j].kind == t.segments[i].kind &&
           t.segments[j].circle == t.segments[i].circle)
      ++j;
    std::string pts;
    for (size_t k = i; k <= j; ++k) pts += detail::coords(t.points[k]) + (k < j ? " " : "");
    const char* color = t.segments[i].kind == SegmentKind::free_step ? "#cc0000" : "#e69138";
    body += std::string("<polyline points=\"") + pts + "\" fill=\"none\" stroke=\"" + color +
            "\" stroke-width=\"0.012\"/>\n";
    i = j;
  }
  body += "<circle cx=\"" + fmt(t.terminal.x) + "\" cy=\"" + fmt(-t.terminal.y) +
          "\" r=\"0.02\" fill=\"#cc0000\"/>\n";
  return detail::document(w.bounds(), body);
}

// Grayscale sublevel shading of a potential over the workspace with critical
// points marked.
template <PotentialField P>
std::string render_field(const P& pot, const Workspace& w,
                         const std::vector<CriticalPoint>& points, int n = 96) {
  Rect box = w.bounds();
  double dx = box.width() / n, dy = box.height() / n;
  std::vector<double> vals;
  std::vector<Point> cells;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      Point p{box.lo.x + (ix + 0.5) * dx, box.lo.y + (iy + 0.5) * dy};
      if (!w.contains(p)) continue;
      double v = pot.value(p);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      vals.push_back(v);
      cells.push_back(p);
    }
  std::string body;
  for (size_t k = 0; k < cells.size(); ++k) {
    int shade = hi > lo ? static_cast<int>(235.0 * (1.0 - (vals[k] - lo) / (hi - lo))) : 128;
    body += "<rect x=\"" + fmt(cells[k].x - dx / 2) + "\" y=\"" + fmt(-cells[k].y - dy / 2) +
            "\" width=\"" + fmt(dx) + "\" height=\"" + fmt(dy) + "\" fill=\"rgb(" +
            std::to_string(shade) + "," + std::to_string(shade) + ",255)\"/>\n";
  }
  for (const CriticalPoint& cp : points) {
    const char* color = cp.index == 0 ? "#38761d" : (cp.index == 1 ? "#cc0000" : "#674ea7");
    body += "<circle cx=\"" + fmt(cp.location.x) + "\" cy=\"" + fmt(-cp.location.y) +
            "\" r=\"0.025\" fill=\"" + color + "\"/>\n";
  }
  return detail::document(box, body);
}

}  // namespace spider::svg
