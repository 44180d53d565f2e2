#pragma once

#include <algorithm>
#include <array>
#include <numbers>
#include <optional>
#include <vector>

#include "spiderlab/geom.hpp"

namespace spider {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct LegLengths {
  double thigh = 0.0;  // link at the foot
  double shin = 0.0;   // link at the center
};

// Feet plus per-leg link lengths. Annulus radii follow as
// R- = thigh - shin, R+ = thigh + shin.
struct SpiderSpec {
  Triangle feet;
  std::array<LegLengths, 3> legs;

  double r_minus(int i) const { return legs[i].thigh - legs[i].shin; }
  double r_plus(int i) const { return legs[i].thigh + legs[i].shin; }

  static SpiderSpec uniform(const Triangle& feet, double thigh, double shin) {
    return {feet, {LegLengths{thigh, shin}, LegLengths{thigh, shin}, LegLengths{thigh, shin}}};
  }

  void validate() const {
    if (feet.degenerate())
      throw Error("InvalidSpiderSpec", "feet triangle is degenerate");
    static const char* names[3] = {"A", "B", "C"};
    for (int i = 0; i < 3; ++i) {
      if (!(legs[i].shin > 0.0))
        throw Error("InvalidSpiderSpec",
                    std::string("leg ") + std::to_string(i + 1) + " (foot " + names[i] +
                        "): shin must be positive");
      if (!(legs[i].thigh > legs[i].shin))
        throw Error("InvalidSpiderSpec",
                    std::string("leg ") + std::to_string(i + 1) + " (foot " + names[i] +
                        "): thigh must be greater than shin");
    }
  }
};

struct Annulus {
  Point center;
  double r_minus = 0.0;
  double r_plus = 0.0;
};

enum class CircleKind { outer, inner };

struct ConstraintCircle {
  Point center;
  double radius = 0.0;
  int foot = -1;
  CircleKind kind = CircleKind::outer;

  Point at(double theta) const {
    return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
  }
  double angle_of(Point p) const {
    double a = std::atan2(p.y - center.y, p.x - center.x);
    return a < 0.0 ? a + two_pi : a;
  }
  // Outward normal of the workspace across this circle: away from the center
  // for an outer constraint, toward it for an inner one (a hole).
  Vec2 outward_normal(Point p) const {
    Vec2 n = normalized(p - center);
    return kind == CircleKind::outer ? n : -n;
  }
};

// Angle interval [theta0, theta1] measured counterclockwise with
// theta1 in (theta0, theta0 + 2pi]. The boundary traverses outer-circle arcs
// counterclockwise and inner-circle arcs clockwise (region on the left).
struct BoundaryArc {
  int circle = -1;
  double theta0 = 0.0;
  double theta1 = 0.0;
  bool full = false;
  int corner_start = -1;  // corner at theta0 (-1 for full circles)
  int corner_end = -1;    // corner at theta1

  double span() const { return theta1 - theta0; }
  bool contains_angle(double theta, double margin = 0.0) const {
    if (full) return true;
    double t = theta;
    while (t < theta0) t += two_pi;
    while (t >= theta0 + two_pi) t -= two_pi;
    return t >= theta0 + margin && t <= theta1 - margin;
  }
};

struct Corner {
  Point at;
  int arc_a = -1;
  int arc_b = -1;
};

struct BoundaryComponent {
  std::vector<int> arcs;  // cyclically ordered, region on the left
  bool outer = false;
  double signed_area = 0.0;
};

struct ActiveConstraint {
  int foot = -1;
  CircleKind kind = CircleKind::outer;
};

class Workspace {
public:
  Triangle feet;
  std::array<Annulus, 3> constraints{};
  std::vector<ConstraintCircle> circles;
  std::vector<BoundaryArc> arcs;
  std::vector<Corner> corners;
  std::vector<BoundaryComponent> components;

  bool empty() const { return components.empty(); }

  // Closed membership: all three annulus constraints within the geometric
  // tolerance (the boundary belongs to the workspace).
  bool contains(Point p) const {
    for (const auto& an : constraints) {
      double d = distance(p, an.center);
      if (d < an.r_minus - eps_geo || d > an.r_plus + eps_geo) return false;
    }
    return true;
  }

  // Smallest signed slack against all constraints; negative outside.
  double boundary_slack(Point p) const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& an : constraints) {
      double d = distance(p, an.center);
      m = std::min(m, d - an.r_minus);
      m = std::min(m, an.r_plus - d);
    }
    return m;
  }

  std::vector<ActiveConstraint> active_constraints(Point p, double tol = eps_geo) const {
    std::vector<ActiveConstraint> out;
    for (int i = 0; i < 3; ++i) {
      double d = distance(p, constraints[i].center);
      if (std::abs(d - constraints[i].r_minus) <= tol && constraints[i].r_minus > 0.0)
        out.push_back({i, CircleKind::inner});
      else if (std::abs(constraints[i].r_plus - d) <= tol)
        out.push_back({i, CircleKind::outer});
    }
    return out;
  }

  std::pair<int, int> betti() const {
    int b0 = 0, b1 = 0;
    for (const auto& c : components) (c.outer ? b0 : b1)++;
    return {b0, b1};
  }

  // Arcs on positively oriented (outer) boundary components.
  std::vector<int> outer_arcs() const {
    std::vector<int> out;
    for (const auto& c : components)
      if (c.outer) out.insert(out.end(), c.arcs.begin(), c.arcs.end());
    return out;
  }

  // Full inner circles active as hole boundaries.
  std::vector<int> hole_circles() const {
    std::vector<int> out;
    for (const auto& c : components)
      if (!c.outer && c.arcs.size() == 1 && arcs[c.arcs[0]].full)
        out.push_back(arcs[c.arcs[0]].circle);
    return out;
  }

  Rect bounds() const {
    Rect r{{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()},
           {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()}};
    for (const auto& an : constraints) {
      Rect box{{an.center.x - an.r_plus, an.center.y - an.r_plus},
               {an.center.x + an.r_plus, an.center.y + an.r_plus}};
      r = bounds_intersection(r, box);
    }
    return r;
  }
};

inline std::pair<int, int> topology(const Workspace& w) { return w.betti(); }

inline const std::vector<BoundaryComponent>& boundary_arcs(const Workspace& w) {
  if (w.empty()) throw Error("EmptyWorkspace", "no boundary to enumerate");
  return w.components;
}

// Closed-form hole test: the closed disc of radius R- about foot i lies
// strictly inside the intersection of the other two annuli.
inline bool inner_disc_is_hole(const std::array<Annulus, 3>& an, int i) {
  if (!(an[i].r_minus > 0.0)) return false;
  for (int j = 0; j < 3; ++j) {
    if (j == i) continue;
    double d = distance(an[i].center, an[j].center);
    if (!(d + an[i].r_minus < an[j].r_plus - eps_geo)) return false;
    if (!(d - an[i].r_minus > an[j].r_minus + eps_geo)) return false;
  }
  return true;
}

namespace detail {

inline bool satisfies_all(const std::array<Annulus, 3>& an, Point p, double slack) {
  for (const auto& a : an) {
    double d = distance(p, a.center);
    if (d < a.r_minus - slack || d > a.r_plus + slack) return false;
  }
  return true;
}

// CCW area contribution of a circle arc, 0.5 * integral of (x dy - y dx).
inline double arc_area_ccw(const ConstraintCircle& c, double t0, double t1) {
  double r = c.radius;
  return 0.5 * (r * r * (t1 - t0) +
                r * (c.center.x * (std::sin(t1) - std::sin(t0)) -
                     c.center.y * (std::cos(t1) - std::cos(t0))));
}

}  // namespace detail

inline Workspace build_workspace_from_annuli(const Triangle& feet,
                                             const std::array<Annulus, 3>& annuli) {
  Workspace w;
  w.feet = feet;
  w.constraints = annuli;
  for (int i = 0; i < 3; ++i)
    w.circles.push_back({annuli[i].center, annuli[i].r_plus, i, CircleKind::outer});
  for (int i = 0; i < 3; ++i)
    if (annuli[i].r_minus > 0.0)
      w.circles.push_back({annuli[i].center, annuli[i].r_minus, i, CircleKind::inner});

  const int nc = static_cast<int>(w.circles.size());

  // Pairwise tangencies are modeling defects, not cases to resolve silently.
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) {
      const auto& ci = w.circles[i];
      const auto& cj = w.circles[j];
      double d = distance(ci.center, cj.center);
      if (d < eps_geo) continue;  // concentric pair, radii differ
      if (std::abs(d - (ci.radius + cj.radius)) <= eps_geo ||
          std::abs(d - std::abs(ci.radius - cj.radius)) <= eps_geo)
        throw Error("DegenerateTangency",
                    "constraint circles " + std::to_string(i) + " and " + std::to_string(j) +
                        " are tangent");
    }

  // Boundary-feasible crossing points of constraint circles.
  struct Crossing {
    Point at;
    int ca, cb;
  };
  std::vector<Crossing> crossings;
  for (int i = 0; i < nc; ++i)
    for (int j = i + 1; j < nc; ++j) {
      const auto& ci = w.circles[i];
      const auto& cj = w.circles[j];
      if (distance(ci.center, cj.center) < eps_geo) continue;
      for (Point p : circle_circle_intersections(ci.center, ci.radius, cj.center, cj.radius))
        if (detail::satisfies_all(annuli, p, eps_geo)) crossings.push_back({p, i, j});
    }

  // Split each circle at its crossings; keep arcs whose midpoints are
  // feasible, and full circles that lie on the boundary untouched.
  struct Entry {
    double theta;
    int crossing;
  };
  std::vector<std::vector<int>> incident(crossings.size());
  for (int k = 0; k < nc; ++k) {
    const auto& ck = w.circles[k];
    std::vector<Entry> entries;
    for (int q = 0; q < static_cast<int>(crossings.size()); ++q)
      if (crossings[q].ca == k || crossings[q].cb == k)
        entries.push_back({ck.angle_of(crossings[q].at), q});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.theta < b.theta; });

    if (entries.empty()) {
      bool on_boundary = true;
      for (int s = 0; s < 4 && on_boundary; ++s)
        on_boundary = detail::satisfies_all(annuli, ck.at(s * two_pi / 4.0), eps_geo);
      if (on_boundary)
        w.arcs.push_back({k, 0.0, two_pi, true, -1, -1});
      continue;
    }
    if (entries.size() == 1)
      throw Error("DegenerateTangency", "isolated boundary crossing on circle " + std::to_string(k));
    for (size_t m = 0; m < entries.size(); ++m) {
      const Entry& e0 = entries[m];
      const Entry& e1 = entries[(m + 1) % entries.size()];
      double t0 = e0.theta;
      double t1 = m + 1 < entries.size() ? e1.theta : e1.theta + two_pi;
      if (t1 - t0 < 1e-12)
        throw Error("DegenerateTangency", "concurrent constraint circles at a boundary point");
      Point mid = ck.at((t0 + t1) / 2.0);
      if (!detail::satisfies_all(annuli, mid, eps_geo)) continue;
      int arc_id = static_cast<int>(w.arcs.size());
      w.arcs.push_back({k, t0, t1, false, e0.crossing, e1.crossing});
      incident[e0.crossing].push_back(arc_id);
      incident[e1.crossing].push_back(arc_id);
    }
  }

  // Crossings used by arcs become corners; remap ids and check regularity.
  std::vector<int> corner_id(crossings.size(), -1);
  for (size_t q = 0; q < crossings.size(); ++q) {
    if (incident[q].empty()) continue;
    if (incident[q].size() != 2)
      throw Error("DegenerateTangency", "boundary crossing with irregular arc incidence");
    corner_id[q] = static_cast<int>(w.corners.size());
    w.corners.push_back({crossings[q].at, incident[q][0], incident[q][1]});
  }
  for (auto& arc : w.arcs) {
    if (arc.full) continue;
    if (corner_id[arc.corner_start] < 0 || corner_id[arc.corner_end] < 0)
      throw Error("DegenerateTangency", "boundary arc ends at a pinch point");
    arc.corner_start = corner_id[arc.corner_start];
    arc.corner_end = corner_id[arc.corner_end];
  }

  // Chain arcs into boundary cycles. Traversal keeps the region on the left:
  // outer arcs run theta0 -> theta1 (CCW), inner arcs theta1 -> theta0.
  auto traversal_start = [&](const BoundaryArc& a) {
    return w.circles[a.circle].kind == CircleKind::outer ? a.corner_start : a.corner_end;
  };
  auto traversal_end = [&](const BoundaryArc& a) {
    return w.circles[a.circle].kind == CircleKind::outer ? a.corner_end : a.corner_start;
  };

  std::vector<char> used(w.arcs.size(), 0);
  for (size_t first = 0; first < w.arcs.size(); ++first) {
    if (used[first]) continue;
    BoundaryComponent comp;
    int cur = static_cast<int>(first);
    while (!used[cur]) {
      used[cur] = 1;
      comp.arcs.push_back(cur);
      const auto& a = w.arcs[cur];
      double s = detail::arc_area_ccw(w.circles[a.circle], a.theta0, a.theta1);
      comp.signed_area += w.circles[a.circle].kind == CircleKind::outer ? s : -s;
      if (a.full) break;
      int corner = traversal_end(a);
      int next = w.corners[corner].arc_a == cur ? w.corners[corner].arc_b : w.corners[corner].arc_a;
      if (traversal_start(w.arcs[next]) != corner)
        throw Error("DegenerateTangency", "inconsistent boundary orientation at a corner");
      cur = next;
    }
    comp.outer = comp.signed_area > 0.0;
    w.components.push_back(std::move(comp));
  }

  std::stable_sort(w.components.begin(), w.components.end(),
                   [](const BoundaryComponent& a, const BoundaryComponent& b) {
                     return a.signed_area > b.signed_area;
                   });

  if (w.components.empty()) {
    // No boundary pieces: either genuinely empty or inconsistent construction.
    Rect box = w.bounds();
    if (box.width() > 0.0 && box.height() > 0.0) {
      for (int iy = 0; iy < 64; ++iy)
        for (int ix = 0; ix < 64; ++ix) {
          Point p{box.lo.x + (ix + 0.5) * box.width() / 64.0,
                  box.lo.y + (iy + 0.5) * box.height() / 64.0};
          if (w.contains(p))
            throw std::logic_error("workspace has interior points but no boundary pieces");
        }
    }
    throw Error("EmptyWorkspace", "no point satisfies all annulus constraints");
  }
  return w;
}

inline Workspace build_workspace(const SpiderSpec& spec) {
  spec.validate();
  std::array<Annulus, 3> annuli;
  for (int i = 0; i < 3; ++i)
    annuli[i] = {spec.feet.vertex(i), spec.r_minus(i), spec.r_plus(i)};
  return build_workspace_from_annuli(spec.feet, annuli);
}

inline bool contains(const Workspace& w, Point p) { return w.contains(p); }

}  // namespace spider
