#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spider {

// Single geometric tolerance for tangency/degeneracy decisions (absolute,
// model units; all shipped fixtures are O(1)-sized).
inline constexpr double eps_geo = 1e-9;

// Domain error with a stable name so reports can quote it verbatim.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
};

using Point = Vec2;

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 normalized(Vec2 a) {
  double n = norm(a);
  return n > 0.0 ? a / n : Vec2{0.0, 0.0};
}

// Symmetric 2x2 matrix (Hessians).
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  bool positive_definite() const { return det() > 0.0 && trace() > 0.0; }

  Mat2 operator+(Mat2 o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
  Mat2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
  Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
};

// Solve M s = r for symmetric M; returns false when |det| <= tol.
inline bool solve(const Mat2& m, Vec2 r, Vec2& s, double tol = 0.0) {
  double d = m.det();
  if (std::abs(d) <= tol) return false;
  s = {(m.yy * r.x - m.xy * r.y) / d, (m.xx * r.y - m.xy * r.x) / d};
  return true;
}

// Morse index of a non-degenerate symmetric matrix: number of negative
// eigenvalues. Caller is responsible for screening |det| against its own
// degeneracy threshold first.
inline int morse_index(const Mat2& m) {
  double d = m.det();
  if (d < 0.0) return 1;
  return m.trace() > 0.0 ? 0 : 2;
}

struct Rect {
  Point lo;
  Point hi;

  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  Point center() const { return {(lo.x + hi.x) / 2, (lo.y + hi.y) / 2}; }
  bool contains(Point p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Rect scaled(double f) const {
    Point c = center();
    return {c + (lo - c) * f, c + (hi - c) * f};
  }
  Rect padded(double m) const { return {{lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}}; }
};

inline Rect bounds_union(Rect a, Rect b) {
  return {{std::min(a.lo.x, b.lo.x), std::min(a.lo.y, b.lo.y)},
          {std::max(a.hi.x, b.hi.x), std::max(a.hi.y, b.hi.y)}};
}

inline Rect bounds_intersection(Rect a, Rect b) {
  return {{std::max(a.lo.x, b.lo.x), std::max(a.lo.y, b.lo.y)},
          {std::min(a.hi.x, b.hi.x), std::min(a.hi.y, b.hi.y)}};
}

// One half of the cross product of (q-p, r-p); sign encodes orientation,
// 0 for collinear input.
inline double signed_area(Point p, Point q, Point r) {
  return 0.5 * cross(q - p, r - p);
}

// Feet A, B, C of the reference triangle.
struct Triangle {
  Point a, b, c;

  Point vertex(int i) const { return i == 0 ? a : (i == 1 ? b : c); }
  double signed_area() const { return spider::signed_area(a, b, c); }
  double area() const { return std::abs(signed_area()); }
  Point centroid() const { return (a + b + c) / 3.0; }
  bool degenerate() const { return area() <= eps_geo; }

  Rect bounds() const {
    return {{std::min({a.x, b.x, c.x}), std::min({a.y, b.y, c.y})},
            {std::max({a.x, b.x, c.x}), std::max({a.y, b.y, c.y})}};
  }
};

// Distances, unsigned sub-triangle areas and apex angles of X against the
// three feet. Area index i is the sub-triangle opposite vertex i
// (area[0] = |BCX|), angle index i is the angle at X in that sub-triangle.
struct SubtriangleData {
  std::array<double, 3> dist;
  std::array<double, 3> area;
  std::array<double, 3> angle;
};

inline SubtriangleData subtriangle_data(Point x, const Triangle& tri) {
  SubtriangleData out;
  for (int i = 0; i < 3; ++i) {
    out.dist[i] = distance(x, tri.vertex(i));
    if (out.dist[i] < eps_geo)
      throw Error("DegenerateAtFoot", "point coincides with foot " + std::to_string(i));
  }
  out.area[0] = std::abs(signed_area(tri.b, tri.c, x));
  out.area[1] = std::abs(signed_area(tri.c, tri.a, x));
  out.area[2] = std::abs(signed_area(tri.a, tri.b, x));
  for (int i = 0; i < 3; ++i) {
    Vec2 u = tri.vertex((i + 1) % 3) - x;
    Vec2 v = tri.vertex((i + 2) % 3) - x;
    out.angle[i] = std::atan2(std::abs(cross(u, v)), dot(u, v));
  }
  return out;
}

// Barycentric weights of x: w0*a + w1*b + w2*c = x, w0+w1+w2 = 1, signed
// for exterior points. Requires a non-degenerate triangle.
inline std::array<double, 3> barycentric(Point x, const Triangle& tri) {
  double total = tri.signed_area();
  return {signed_area(x, tri.b, tri.c) / total,
          signed_area(tri.a, x, tri.c) / total,
          signed_area(tri.a, tri.b, x) / total};
}

// Intersection points of two circles. One point exactly at tangency within
// eps_geo; results ordered by the +perp side first.
inline std::vector<Point> circle_circle_intersections(Point c1, double r1, Point c2, double r2) {
  double d = distance(c1, c2);
  if (d < eps_geo && std::abs(r1 - r2) < eps_geo)
    throw Error("CoincidentCircles", "identical circles have no isolated intersections");
  if (d > r1 + r2 + eps_geo || d < std::abs(r1 - r2) - eps_geo) return {};
  Vec2 u = (c2 - c1) / d;
  if (std::abs(d - (r1 + r2)) <= eps_geo) return {c1 + r1 * u};
  if (std::abs(d - std::abs(r1 - r2)) <= eps_geo)
    return {c1 + (r1 >= r2 ? r1 : -r1) * u};
  double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  double h2 = r1 * r1 - a * a;
  double h = std::sqrt(std::max(h2, 0.0));
  Point mid = c1 + a * u;
  Vec2 off = h * perp(u);
  return {mid + off, mid - off};
}

// Intersections of the infinite line through p, q with a circle; ordered by
// increasing parameter along p->q. Requires p != q.
inline std::vector<Point> line_circle_intersections(Point p, Point q, Point center, double r) {
  Vec2 dir = q - p;
  double len2 = norm2(dir);
  double t0 = dot(center - p, dir) / len2;
  Point closest = p + t0 * dir;
  double dist = distance(closest, center);
  if (dist > r + eps_geo) return {};
  if (std::abs(dist - r) <= eps_geo) return {closest};
  double dt = std::sqrt(std::max(r * r - dist * dist, 0.0) / len2);
  return {p + (t0 - dt) * dir, p + (t0 + dt) * dir};
}

}  // namespace spider
