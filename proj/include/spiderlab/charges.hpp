#pragma once

#include <functional>
#include <vector>

#include "spiderlab/potentials.hpp"
#include "spiderlab/workspace.hpp"

namespace spider {

// Sampled implicit region: a deterministic membership predicate plus the grid
// points that satisfy it. resolution is the grid spacing.
struct Region {
  std::function<bool(Point)> member;
  std::vector<Point> sample;
  double resolution = 0.0;

  bool empty() const { return sample.empty(); }
};

struct Equilibrium {
  Point location;
  int index = -1;
  double residual = 0.0;
  bool degenerate = false;
};

// The unique (up to scale) charge triple making x an equilibrium of the
// Coulomb potential: q_i proportional to d_i^3 * w_i with w_i the signed
// barycentric weight of x, so that
//   grad E = -sum q_i (x - a_i) / d_i^3 = -(sum w_i) x + sum w_i a_i = 0
// identically. Normalized to |q1|+|q2|+|q3| = 1 with the leading nonzero
// component positive; all components positive for interior x.
inline ChargeTriple stationary_charges(Point x, const Triangle& tri) {
  SubtriangleData sd = subtriangle_data(x, tri);
  auto wts = barycentric(x, tri);
  double total = tri.area();
  std::array<double, 3> q;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(wts[i]) * total < eps_geo)
      throw Error("ZeroCharge", "point lies on the line through the other two feet");
    q[i] = sd.dist[i] * sd.dist[i] * sd.dist[i] * wts[i];
  }
  double scale = std::abs(q[0]) + std::abs(q[1]) + std::abs(q[2]);
  for (int i = 0; i < 3; ++i) q[i] /= scale;
  for (int i = 0; i < 3; ++i) {
    if (q[i] == 0.0) continue;
    if (q[i] < 0.0)
      for (int j = 0; j < 3; ++j) q[j] = -q[j];
    break;
  }
  return {q[0], q[1], q[2]};
}

// Closed-form trapping Hessian
//   h(X) = -2 A + 9 (prod sin alpha_i) (sum d_i^2 A_i).
// The two summands carry different units; the form is sign-equivalent to the
// Hessian determinant of the induced potential only for configurations of
// area 1/2 (rescale the triangle, or use 9 (prod sin)(sum d^2 A)/(4 A^2) - 1,
// to compare signs on other triangles). The decisive trapping predicate is
// trapping_test below.
inline double trapping_hessian(Point x, const Triangle& tri) {
  SubtriangleData sd = subtriangle_data(x, tri);
  double total = tri.area();
  double sines = std::sin(sd.angle[0]) * std::sin(sd.angle[1]) * std::sin(sd.angle[2]);
  double moment = 0.0;
  for (int i = 0; i < 3; ++i) moment += sd.dist[i] * sd.dist[i] * sd.area[i];
  return -2.0 * total + 9.0 * sines * moment;
}

// Decisive trapping predicate: the Hessian of E(., Q(X)) at X is positive
// definite. The closed-form h is the cross-check, not the decision.
inline bool trapping_test(Point x, const Triangle& tri) {
  auto wts = barycentric(x, tri);
  double total = tri.area();
  for (double w : wts)
    if (!(w * total > eps_geo)) return false;  // not strictly inside
  try {
    ChargeTriple q = stationary_charges(x, tri);
    return coulomb_hessian(x, tri, q).positive_definite();
  } catch (const Error&) {
    return false;
  }
}

namespace detail {
template <class Member>
Region sample_region(Member&& member, Rect box, int resolution) {
  Region r;
  r.member = member;
  double spacing = std::max(box.width(), box.height()) / resolution;
  r.resolution = spacing;
  int nx = static_cast<int>(std::ceil(box.width() / spacing));
  int ny = static_cast<int>(std::ceil(box.height() / spacing));
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      Point p{box.lo.x + (ix + 0.5) * spacing, box.lo.y + (iy + 0.5) * spacing};
      if (r.member(p)) r.sample.push_back(p);
    }
  return r;
}
}  // namespace detail

// Coulomb trapping domain T of the triangle, sampled on the triangle's
// bounding box.
inline Region trapping_domain(const Triangle& tri, int resolution = 128) {
  return detail::sample_region([tri](Point p) { return trapping_test(p, tri); }, tri.bounds(),
                               resolution);
}

// Robust Coulomb control domain D(S): workspace membership and trapping test
// both hold. Empty is a valid result.
inline Region robust_domain(const SpiderSpec& spec, int resolution = 128) {
  spec.validate();
  Workspace w;
  try {
    w = build_workspace(spec);
  } catch (const Error& e) {
    if (std::string(e.name()) == "EmptyWorkspace")
      return Region{[](Point) { return false; }, {}, 0.0};
    throw;
  }
  Triangle feet = spec.feet;
  auto member = [w, feet](Point p) { return w.contains(p) && trapping_test(p, feet); };
  return detail::sample_region(member, w.bounds(), resolution);
}

struct EquilibriaOptions {
  int grid_n = 512;
  double dedup_radius = 1e-6;
  double pole_clearance = 1e-3;
};

// All isolated equilibria of the charge triple in the search window (default:
// three times the triangle's bounding box), grid-seeded and Newton-polished.
// Degenerate Hessians are flagged, not classified.
inline std::vector<Equilibrium> equilibria(const Triangle& tri, const ChargeTriple& q,
                                           std::optional<Rect> window = std::nullopt,
                                           const EquilibriaOptions& opt = {}) {
  if (q.q1 == 0.0 || q.q2 == 0.0 || q.q3 == 0.0)
    throw Error("ZeroCharge", "equilibria are defined for non-zero charges");
  Rect win = window.value_or(tri.bounds().scaled(3.0));
  Coulomb pot{tri, q};

  const int n = opt.grid_n;
  const double dx = win.width() / n, dy = win.height() / n;
  std::vector<double> g2(static_cast<size_t>(n) * n,
                         std::numeric_limits<double>::infinity());
  auto center = [&](int ix, int iy) -> Point {
    return {win.lo.x + (ix + 0.5) * dx, win.lo.y + (iy + 0.5) * dy};
  };
  auto near_pole = [&](Point p) {
    for (int i = 0; i < 3; ++i)
      if (distance(p, tri.vertex(i)) < opt.pole_clearance) return true;
    return false;
  };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      Point p = center(ix, iy);
      if (near_pole(p)) continue;
      g2[iy * n + ix] = norm2(coulomb_gradient(p, tri, q));
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
      if (local_min) seeds.push_back(center(ix, iy));
    }
  // Close zero pairs (near a saddle-node) can share one shallow crease in
  // |grad|^2; the globally smallest cells seed both members.
  {
    std::vector<int> cells;
    for (int id = 0; id < n * n; ++id)
      if (std::isfinite(g2[id])) cells.push_back(id);
    size_t extra = std::min<size_t>(64, cells.size());
    std::partial_sort(cells.begin(), cells.begin() + extra, cells.end(),
                      [&](int a, int b) { return g2[a] < g2[b] || (g2[a] == g2[b] && a < b); });
    for (size_t k = 0; k < extra; ++k) seeds.push_back(center(cells[k] % n, cells[k] / n));
  }

  Rect guard = win.scaled(1.5);
  double residual_tol = 1e-11 * std::max(1.0, q.abs_sum());
  std::vector<Point> zeros;
  for (Point s : seeds) {
    Point x = s;
    bool ok = true;
    for (int it = 0; it < 100; ++it) {
      if (!guard.contains(x) || near_pole(x)) { ok = false; break; }
      Vec2 g = coulomb_gradient(x, tri, q);
      if (norm(g) <= residual_tol) break;
      Vec2 step;
      if (!solve(coulomb_hessian(x, tri, q), -1.0 * g, step, 1e-300)) { ok = false; break; }
      double len = norm(step);
      if (len > 0.25) step = step * (0.25 / len);
      x += step;
    }
    if (!ok || !win.contains(x) || near_pole(x)) continue;
    if (norm(coulomb_gradient(x, tri, q)) > residual_tol) continue;
    zeros.push_back(x);
  }

  std::sort(zeros.begin(), zeros.end(),
            [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Equilibrium> out;
  for (Point x : zeros) {
    bool fresh = true;
    for (const Equilibrium& e : out)
      if (distance(x, e.location) <= opt.dedup_radius) fresh = false;
    if (!fresh) continue;
    Equilibrium e;
    e.location = x;
    e.residual = norm(coulomb_gradient(x, tri, q));
    Mat2 h = coulomb_hessian(x, tri, q);
    if (std::abs(h.det()) < 1e-10)
      e.degenerate = true;
    else
      e.index = morse_index(h);
    out.push_back(e);
  }
  return out;
}

}  // namespace spider
