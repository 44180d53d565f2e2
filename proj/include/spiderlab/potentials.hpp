#pragma once

#include <array>
#include <concepts>
#include <optional>

#include "spiderlab/geom.hpp"

namespace spider {

// Positive control weights (alpha, beta, gamma) of the weighted Hooke energy.
struct Weights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;

  double sum() const { return alpha + beta + gamma; }
  double operator[](int i) const { return i == 0 ? alpha : (i == 1 ? beta : gamma); }
};

inline void require_positive(const Weights& w) {
  if (!(w.alpha > 0.0 && w.beta > 0.0 && w.gamma > 0.0))
    throw Error("InvalidWeights", "all weights must be strictly positive");
}

// Charge magnitudes at the feet. stationary_charges() produces triples
// normalized to |q1|+|q2|+|q3| = 1 with the leading nonzero component
// positive; arbitrary triples are accepted by the Coulomb evaluators.
struct ChargeTriple {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;

  double operator[](int i) const { return i == 0 ? q1 : (i == 1 ? q2 : q3); }
  double abs_sum() const { return std::abs(q1) + std::abs(q2) + std::abs(q3); }
};

// Completed-square form of a (weighted) Hooke energy:
//   H(x) = coefficient * |x - center|^2 + offset,
// with coefficient = alpha + beta + gamma (3 for the unweighted energy).
struct HookeForm {
  Point center;
  double offset = 0.0;
  double coefficient = 0.0;

  double operator()(Point x) const { return coefficient * norm2(x - center) + offset; }
};

// --- Hooke energy -----------------------------------------------------------

inline double hooke_value(Point x, const Triangle& tri) {
  return norm2(x - tri.a) + norm2(x - tri.b) + norm2(x - tri.c);
}

inline Vec2 hooke_gradient(Point x, const Triangle& tri) {
  return 6.0 * x - 2.0 * (tri.a + tri.b + tri.c);
}

inline Mat2 hooke_hessian() { return {6.0, 0.0, 6.0}; }

inline HookeForm hooke_form(const Triangle& tri) {
  Point z = tri.centroid();
  double k = norm2(tri.a) + norm2(tri.b) + norm2(tri.c) - 3.0 * norm2(z);
  return {z, k, 3.0};
}

// --- Weighted Hooke energy --------------------------------------------------

inline double weighted_hooke(Point x, const Triangle& tri, const Weights& w) {
  require_positive(w);
  return w.alpha * norm2(x - tri.a) + w.beta * norm2(x - tri.b) + w.gamma * norm2(x - tri.c);
}

inline Vec2 weighted_hooke_gradient(Point x, const Triangle& tri, const Weights& w) {
  require_positive(w);
  return 2.0 * w.sum() * x - 2.0 * (w.alpha * tri.a + w.beta * tri.b + w.gamma * tri.c);
}

inline Mat2 weighted_hooke_hessian(const Weights& w) {
  double s = 2.0 * w.sum();
  return {s, 0.0, s};
}

// The point Z with barycentric coordinates (alpha : beta : gamma); unique
// stationary point and absolute minimum of the weighted energy.
inline Point weighted_minimum(const Triangle& tri, const Weights& w) {
  require_positive(w);
  return (w.alpha * tri.a + w.beta * tri.b + w.gamma * tri.c) / w.sum();
}

inline HookeForm weighted_hooke_form(const Triangle& tri, const Weights& w) {
  Point z = weighted_minimum(tri, w);
  double k = w.alpha * norm2(tri.a) + w.beta * norm2(tri.b) + w.gamma * norm2(tri.c)
             - w.sum() * norm2(z);
  return {z, k, w.sum()};
}

// --- Coulomb potential ------------------------------------------------------

namespace detail {
inline std::array<double, 3> foot_distances(Point x, const Triangle& tri) {
  std::array<double, 3> d;
  for (int i = 0; i < 3; ++i) {
    d[i] = distance(x, tri.vertex(i));
    if (d[i] < eps_geo)
      throw Error("PoleAtFoot", "evaluation point at foot " + std::to_string(i));
  }
  return d;
}
}  // namespace detail

inline double coulomb_value(Point x, const Triangle& tri, const ChargeTriple& q) {
  auto d = detail::foot_distances(x, tri);
  return q.q1 / d[0] + q.q2 / d[1] + q.q3 / d[2];
}

inline Vec2 coulomb_gradient(Point x, const Triangle& tri, const ChargeTriple& q) {
  auto d = detail::foot_distances(x, tri);
  Vec2 g{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    double d3 = d[i] * d[i] * d[i];
    g -= (q[i] / d3) * (x - tri.vertex(i));
  }
  return g;
}

inline Mat2 coulomb_hessian(Point x, const Triangle& tri, const ChargeTriple& q) {
  auto d = detail::foot_distances(x, tri);
  Mat2 h;
  for (int i = 0; i < 3; ++i) {
    Vec2 r = x - tri.vertex(i);
    double d2 = d[i] * d[i];
    double inv3 = q[i] / (d2 * d[i]);
    double inv5 = 3.0 * inv3 / d2;
    h.xx += inv5 * r.x * r.x - inv3;
    h.xy += inv5 * r.x * r.y;
    h.yy += inv5 * r.y * r.y - inv3;
  }
  return h;
}

// --- Potential field objects ------------------------------------------------
// The census/flow machinery is generic over anything exposing value, gradient
// and hessian. Radial quadratic potentials additionally expose center(), which
// unlocks the closed-form boundary treatment.

template <class P>
concept PotentialField = requires(const P& p, Point x) {
  { p.value(x) } -> std::convertible_to<double>;
  { p.gradient(x) } -> std::convertible_to<Vec2>;
  { p.hessian(x) } -> std::convertible_to<Mat2>;
};

template <class P>
concept RadialQuadratic = PotentialField<P> && requires(const P& p) {
  { p.center() } -> std::convertible_to<Point>;
};

struct Hooke {
  Triangle tri;

  double value(Point x) const { return hooke_value(x, tri); }
  Vec2 gradient(Point x) const { return hooke_gradient(x, tri); }
  Mat2 hessian(Point) const { return hooke_hessian(); }
  Point center() const { return tri.centroid(); }
};

struct WeightedHooke {
  Triangle tri;
  Weights w;

  double value(Point x) const { return weighted_hooke(x, tri, w); }
  Vec2 gradient(Point x) const { return weighted_hooke_gradient(x, tri, w); }
  Mat2 hessian(Point) const { return weighted_hooke_hessian(w); }
  Point center() const { return weighted_minimum(tri, w); }
};

struct Coulomb {
  Triangle tri;
  ChargeTriple q;

  double value(Point x) const { return coulomb_value(x, tri, q); }
  Vec2 gradient(Point x) const { return coulomb_gradient(x, tri, q); }
  Mat2 hessian(Point x) const { return coulomb_hessian(x, tri, q); }
};

}  // namespace spider
