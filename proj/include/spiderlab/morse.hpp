#pragma once

#include <algorithm>
#include <vector>

#include "spiderlab/potentials.hpp"
#include "spiderlab/workspace.hpp"

namespace spider {

enum class CriticalKind { interior, boundary, corner };

// Topological effect of passing a critical level: nothing, a 0-cell
// (new component) or a 1-cell (handle) attaches to the sublevel set.
enum class CellChange { none, cell0, cell1 };

struct CriticalPoint {
  Point location;
  CriticalKind kind = CriticalKind::interior;
  int index = -1;  // -1 while unclassified/degenerate
  double value = 0.0;
  CellChange cell = CellChange::none;
  bool degenerate = false;
};

struct MorseCensus {
  int mu0 = 0;
  int mu1 = 0;
  int mu2 = 0;
  int euler = 0;
  std::vector<CriticalPoint> points;
};

// Critical point of the potential restricted to one boundary arc/circle.
struct BoundaryCritical {
  int arc = -1;
  Point at;
  double theta = 0.0;
  bool restriction_max = false;
  double value = 0.0;
};

struct MorseOptions {
  int seed_grid = 256;             // interior seeding resolution
  double newton_tol = 1e-12;       // gradient residual target
  double dedup_radius = 1e-8;
  double interior_margin = 1e-7;   // clearance from constraint circles
  int scan_samples = 720;          // per full circle, for non-radial potentials
  double degenerate_det_tol = 1e-10;
  double normal_tol = 1e-10;       // TangentGradient threshold
};

namespace detail {

template <PotentialField P>
bool newton_polish(const P& pot, Point& x, const MorseOptions& opt, Rect box) {
  for (int it = 0; it < 80; ++it) {
    Vec2 g;
    try {
      g = pot.gradient(x);
    } catch (const Error&) {
      return false;
    }
    if (norm(g) <= opt.newton_tol) return true;
    Vec2 step;
    if (!solve(pot.hessian(x), -1.0 * g, step, 1e-300)) return false;
    double len = norm(step);
    if (len > 0.5) step = step * (0.5 / len);
    x += step;
    if (!box.contains(x)) return false;
  }
  Vec2 g = pot.gradient(x);
  return norm(g) <= opt.newton_tol;
}

inline void dedup_points(std::vector<Point>& pts, double radius) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Point> unique;
  for (Point p : pts) {
    bool fresh = true;
    for (const Point& q : unique)
      if (distance(p, q) <= radius) fresh = false;
    if (fresh) unique.push_back(p);
  }
  pts = std::move(unique);
}

}  // namespace detail

// All interior gradient zeros: grid-seeded Newton, deduplicated, indexed by
// the Hessian signature. Degenerate zeros (|det H| below tolerance) are
// flagged, not classified.
template <PotentialField P>
std::vector<CriticalPoint> interior_critical_points(const P& pot, const Workspace& w,
                                                    const MorseOptions& opt = {}) {
  if (w.empty()) throw Error("EmptyWorkspace", "no interior to search");
  Rect box = w.bounds();
  Rect wide = box.scaled(1.5);
  const int n = opt.seed_grid;
  const double dx = box.width() / n, dy = box.height() / n;

  std::vector<double> g2(static_cast<size_t>(n) * n,
                         std::numeric_limits<double>::infinity());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      Point p{box.lo.x + (ix + 0.5) * dx, box.lo.y + (iy + 0.5) * dy};
      if (w.boundary_slack(p) <= 0.0) continue;
      try {
        g2[iy * n + ix] = norm2(pot.gradient(p));
      } catch (const Error&) {
      }
    }

  std::vector<Point> seeds;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      double v = g2[iy * n + ix];
      if (!std::isfinite(v)) continue;
      bool local_min = true;
      for (int sy = -1; sy <= 1 && local_min; ++sy)
        for (int sx = -1; sx <= 1 && local_min; ++sx) {
          int jx = ix + sx, jy = iy + sy;
          if (jx < 0 || jy < 0 || jx >= n || jy >= n || (sx == 0 && sy == 0)) continue;
          if (g2[jy * n + jx] < v) local_min = false;
        }
      if (local_min)
        seeds.push_back({box.lo.x + (ix + 0.5) * dx, box.lo.y + (iy + 0.5) * dy});
    }
  {
    // Close zero pairs can share one shallow crease in |grad|^2; the globally
    // smallest cells seed both members.
    std::vector<int> cells;
    for (int id = 0; id < n * n; ++id)
      if (std::isfinite(g2[id])) cells.push_back(id);
    size_t extra = std::min<size_t>(64, cells.size());
    std::partial_sort(cells.begin(), cells.begin() + extra, cells.end(),
                      [&](int a, int b) { return g2[a] < g2[b] || (g2[a] == g2[b] && a < b); });
    for (size_t k = 0; k < extra; ++k)
      seeds.push_back({box.lo.x + (cells[k] % n + 0.5) * dx,
                       box.lo.y + (cells[k] / n + 0.5) * dy});
  }

  std::vector<Point> zeros;
  for (Point s : seeds) {
    Point x = s;
    if (!detail::newton_polish(pot, x, opt, wide)) continue;
    if (w.boundary_slack(x) <= opt.interior_margin) continue;
    zeros.push_back(x);
  }
  detail::dedup_points(zeros, opt.dedup_radius);

  std::vector<CriticalPoint> out;
  for (Point x : zeros) {
    CriticalPoint cp;
    cp.location = x;
    cp.kind = CriticalKind::interior;
    cp.value = pot.value(x);
    Mat2 h = pot.hessian(x);
    if (std::abs(h.det()) < opt.degenerate_det_tol) {
      cp.degenerate = true;
    } else {
      cp.index = morse_index(h);
    }
    out.push_back(cp);
  }
  return out;
}

namespace detail {

template <PotentialField P>
double tangential_derivative(const P& pot, const ConstraintCircle& c, double theta) {
  Point p = c.at(theta);
  Vec2 t{-std::sin(theta), std::cos(theta)};
  return dot(pot.gradient(p), t);
}

template <PotentialField P>
double tangential_second(const P& pot, const ConstraintCircle& c, double theta) {
  Point p = c.at(theta);
  Vec2 er{std::cos(theta), std::sin(theta)};
  Vec2 et{-er.y, er.x};
  Mat2 h = pot.hessian(p);
  return c.radius * dot(et, h * et) - dot(er, pot.gradient(p));
}

// Decide min/max of the restriction at a root of the tangential derivative.
template <PotentialField P>
bool restriction_is_max(const P& pot, const ConstraintCircle& c, double theta) {
  double s = tangential_second(pot, c, theta);
  if (std::abs(s) > 1e-9) return s < 0.0;
  double delta = 1e-4;
  double v0 = pot.value(c.at(theta));
  double vp = pot.value(c.at(theta + delta));
  double vm = pot.value(c.at(theta - delta));
  if (vp < v0 && vm < v0) return true;
  if (vp > v0 && vm > v0) return false;
  throw Error("NonMorsePoint", "degenerate restriction critical on boundary");
}

}  // namespace detail

// Critical points of the potential restricted to each boundary arc/circle.
// Radial quadratic potentials use the closed form (the two intersections of
// the line through the circle center and the potential minimum); everything
// else is located by a parameter scan with bisection refinement. Corners are
// excluded; they are classified separately.
template <PotentialField P>
std::vector<BoundaryCritical> boundary_restriction_criticals(const P& pot, const Workspace& w,
                                                             const MorseOptions& opt = {}) {
  if (w.empty()) throw Error("EmptyWorkspace", "no boundary to restrict to");
  std::vector<BoundaryCritical> out;
  for (int arc_id = 0; arc_id < static_cast<int>(w.arcs.size()); ++arc_id) {
    const BoundaryArc& arc = w.arcs[arc_id];
    const ConstraintCircle& c = w.circles[arc.circle];
    const double end_margin = arc.full ? 0.0 : 1e-8 / c.radius;
    std::vector<double> thetas;

    if constexpr (RadialQuadratic<P>) {
      Point z = pot.center();
      Vec2 u = z - c.center;
      if (norm(u) < eps_geo)
        throw Error("TangentGradient", "restriction degenerate: minimum at circle center");
      u = normalized(u);
      thetas.push_back(c.angle_of(c.center + c.radius * u));   // nearest to z
      thetas.push_back(c.angle_of(c.center - c.radius * u));   // farthest from z
    } else {
      const int m = std::max(16, static_cast<int>(opt.scan_samples * arc.span() / two_pi));
      auto theta_at = [&](int k) { return arc.theta0 + arc.span() * k / m; };
      double prev = detail::tangential_derivative(pot, c, theta_at(0));
      for (int k = 1; k <= m; ++k) {
        double cur = detail::tangential_derivative(pot, c, theta_at(k));
        if (prev == 0.0) thetas.push_back(theta_at(k - 1));
        if (prev * cur < 0.0) {
          double lo = theta_at(k - 1), hi = theta_at(k), flo = prev;
          for (int it = 0; it < 80; ++it) {
            double mid = (lo + hi) / 2.0;
            double fm = detail::tangential_derivative(pot, c, mid);
            if (fm == 0.0) { lo = hi = mid; break; }
            if (flo * fm < 0.0) hi = mid; else { lo = mid; flo = fm; }
          }
          thetas.push_back((lo + hi) / 2.0);
        }
        prev = cur;
      }
    }

    std::sort(thetas.begin(), thetas.end());
    if (arc.full && thetas.size() >= 2 && thetas.back() - thetas.front() > two_pi - 1e-9)
      thetas.pop_back();  // same root seen on both sides of the angle seam
    double last = std::numeric_limits<double>::quiet_NaN();
    for (double t : thetas) {
      if (!arc.contains_angle(t, end_margin)) continue;
      if (std::isfinite(last) && std::abs(t - last) < 1e-9) continue;
      last = t;
      BoundaryCritical bc;
      bc.arc = arc_id;
      bc.theta = t;
      bc.at = c.at(t);
      bc.restriction_max = detail::restriction_is_max(pot, c, t);
      bc.value = pot.value(bc.at);
      out.push_back(bc);
    }
  }
  return out;
}

// Standard rule for a critical point of the restriction on a smooth boundary
// arc, read with the descent direction -grad:
//   restriction min, descent inward  -> no change
//   restriction min, descent outward -> minimum, attaches a 0-cell
//   restriction max, descent inward  -> no change
//   restriction max, descent outward -> saddle, attaches a 1-cell
template <PotentialField P>
CellChange classify_boundary_critical(const P& pot, const BoundaryCritical& bc,
                                      const Workspace& w, const MorseOptions& opt = {}) {
  const ConstraintCircle& c = w.circles[w.arcs[bc.arc].circle];
  Vec2 n_out = c.outward_normal(bc.at);
  double dn = dot(pot.gradient(bc.at), n_out);
  if (std::abs(dn) < opt.normal_tol)
    throw Error("TangentGradient", "gradient tangent to the boundary at a restriction critical");
  bool descent_outward = dn < 0.0;
  if (!descent_outward) return CellChange::none;
  return bc.restriction_max ? CellChange::cell1 : CellChange::cell0;
}

// Corner rule. Constraint corners are intersections of two discs/disc
// complements, so the tangent cone is salient (convex). A convex cone meets
// the descent half-plane in a connected wedge, so a corner can attach a
// 0-cell (local minimum, both boundary rays ascending) or nothing; 1-cells
// cannot appear at salient corners.
template <PotentialField P>
CellChange classify_corner(const P& pot, const Corner& corner, const Workspace& w,
                           const MorseOptions& opt = {}) {
  const ConstraintCircle& ca = w.circles[w.arcs[corner.arc_a].circle];
  const ConstraintCircle& cb = w.circles[w.arcs[corner.arc_b].circle];
  Vec2 na = ca.outward_normal(corner.at);
  Vec2 nb = cb.outward_normal(corner.at);
  Vec2 g = pot.gradient(corner.at);
  if (std::abs(dot(g, na)) < opt.normal_tol || std::abs(dot(g, nb)) < opt.normal_tol)
    throw Error("TangentGradient", "gradient tangent to a boundary circle at a corner");

  Vec2 d = -1.0 * g;
  if (dot(d, na) < 0.0 && dot(d, nb) < 0.0) return CellChange::none;

  // Cone boundary rays: circle tangents signed into the feasible side of the
  // other constraint.
  Vec2 ra = normalized(perp(corner.at - ca.center));
  if (dot(ra, nb) > 0.0) ra = -ra;
  Vec2 rb = normalized(perp(corner.at - cb.center));
  if (dot(rb, na) > 0.0) rb = -rb;

  double da = dot(g, ra), db = dot(g, rb);
  if (std::abs(da) < opt.normal_tol || std::abs(db) < opt.normal_tol)
    throw Error("TangentGradient", "gradient aligned with a corner ray");
  int descending = (da < 0.0 ? 1 : 0) + (db < 0.0 ? 1 : 0);
  return descending == 0 ? CellChange::cell0 : CellChange::none;
}

// Aggregate census over interior, boundary and corner critical points.
template <PotentialField P>
MorseCensus census(const P& pot, const Workspace& w, const MorseOptions& opt = {}) {
  MorseCensus mc;
  for (CriticalPoint cp : interior_critical_points(pot, w, opt)) {
    if (cp.degenerate)
      throw Error("NonMorsePoint", "degenerate interior critical point");
    if (cp.index == 0) mc.mu0++;
    if (cp.index == 1) mc.mu1++;
    if (cp.index == 2) mc.mu2++;
    mc.points.push_back(cp);
  }
  for (const BoundaryCritical& bc : boundary_restriction_criticals(pot, w, opt)) {
    CellChange change = classify_boundary_critical(pot, bc, w, opt);
    if (change == CellChange::none) continue;
    CriticalPoint cp;
    cp.location = bc.at;
    cp.kind = CriticalKind::boundary;
    cp.value = bc.value;
    cp.cell = change;
    cp.index = change == CellChange::cell0 ? 0 : 1;
    (change == CellChange::cell0 ? mc.mu0 : mc.mu1)++;
    mc.points.push_back(cp);
  }
  for (const Corner& corner : w.corners) {
    CellChange change = classify_corner(pot, corner, w, opt);
    if (change == CellChange::none) continue;
    CriticalPoint cp;
    cp.location = corner.at;
    cp.kind = CriticalKind::corner;
    cp.value = pot.value(corner.at);
    cp.cell = change;
    cp.index = change == CellChange::cell0 ? 0 : 1;
    (change == CellChange::cell0 ? mc.mu0 : mc.mu1)++;
    mc.points.push_back(cp);
  }
  mc.euler = mc.mu0 - mc.mu1 + mc.mu2;
  return mc;
}

}  // namespace spider
